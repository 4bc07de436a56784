"""State-based scheduling for slot-timed constant-capacity servers."""
