"""
Pydantic models for configs, records, grids and trajectories.
"""
