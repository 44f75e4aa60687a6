"""CLI, file formats, generators, the (T, L) auto-driver and benchmarks."""
