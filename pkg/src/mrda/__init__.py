"""Multi-run multi-round deferred acceptance seat allocation."""
