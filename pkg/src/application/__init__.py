"""
Application layer - pipeline orchestration.

This layer contains:
- Configuration models (DTOs) validated at the boundary
- Interfaces (ports) for infrastructure dependencies
- Services for data generation, preprocessing, splits, metrics and hashing
- Use cases for training, evaluation and cluster analysis
"""
