import pytest

FIELDS = (163, 233, 283, 571)


@pytest.fixture(scope="session")
def field_plans():
    """Modular-multiplication and inversion plans for the named fields."""
    from binshor.pipeline import inversion_plan, modmult_plan, pointadd_plan

    plans = {}
    for n in FIELDS:
        plans[n] = {
            "modmult": modmult_plan(n),
            "inversion": inversion_plan(n, True),
            "inversion_noclear": inversion_plan(n, False),
            "pointadd": pointadd_plan(n),
        }
    return plans
