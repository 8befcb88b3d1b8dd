from cuid2 import cuid_wrapper

# Run ids label manifests only; checkpoints and reports never embed them
cuid_generator = cuid_wrapper()


def generate_run_id() -> str:
    """Generate a collision-resistant run identifier"""
    result = cuid_generator()
    assert isinstance(result, str)
    return result
