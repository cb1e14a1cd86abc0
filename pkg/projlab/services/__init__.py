"""projlab services."""
