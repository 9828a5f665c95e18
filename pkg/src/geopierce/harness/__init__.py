"""Instance I/O, generation, verification, self-tests, rendering and CLI."""
