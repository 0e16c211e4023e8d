# Per-environment settings
