from src.shared.utils.datetime import utc_now
from src.shared.utils.generators import generate_run_id

__all__ = [
    "generate_run_id",
    "utc_now",
]
