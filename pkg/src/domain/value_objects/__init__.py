from src.domain.value_objects.core import ClusterAssignment, CorrelationGraph, CorrelationMatrix

__all__ = ["ClusterAssignment", "CorrelationGraph", "CorrelationMatrix"]
