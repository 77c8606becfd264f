fn main() {
    // Criterion suite added with the fuzz runner.
}
