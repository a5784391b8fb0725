"""Configuration, formatting and session helpers of the CLI."""
