"""HTTP service exposing trials and sweep jobs over the core package."""
