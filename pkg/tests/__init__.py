"""motflow test suite: unit cases and end-to-end validation modules."""
