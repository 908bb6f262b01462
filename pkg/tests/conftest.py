import pytest
from hypothesis import HealthCheck, settings

from gcverify.multivector import GradedElement, cotangent_frame
from gcverify.scalars import Chart
from gcverify.gcs import GCSContext
from gcverify.multivector import de_rham_d

settings.register_profile(
    "ci",
    max_examples=25,
    deadline=None,
    derandomize=True,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("ci")


@pytest.fixture(scope="session")
def chart2():
    return Chart(["x1", "x2"])


@pytest.fixture(scope="session")
def chart3():
    return Chart(["x1", "x2", "x3"])


@pytest.fixture(scope="session")
def chart4():
    return Chart(["x1", "x2", "x3", "x4"])


def symplectic_spinor(chart):
    tc = cotangent_frame(chart)
    u = GradedElement.from_scalar(tc, chart.one())
    return u + GradedElement.monomial(tc, (0, 1), chart.imaginary())


def complex_spinor(chart):
    tc = cotangent_frame(chart)
    return GradedElement.monomial(tc, (0,)) + GradedElement.monomial(
        tc, (1,), chart.imaginary()
    )


def twisted_b_field_data(chart):
    """exp(B + i w) on the 4-chart with B = x1 dx2^dx3; twist -dB."""
    tc = cotangent_frame(chart)
    i = chart.imaginary()
    b_form = GradedElement.monomial(tc, (1, 2), chart.coordinate(0))
    w = GradedElement.monomial(tc, (0, 1)) + GradedElement.monomial(tc, (2, 3))
    a_form = b_form + w.scale(i)
    u = (
        GradedElement.from_scalar(tc, chart.one())
        + a_form
        + a_form.wedge(a_form).scale(chart.rational(1, 2))
    )
    h = de_rham_d(b_form).scale(chart.integer(-1))
    return u, h


@pytest.fixture(scope="session")
def ctx_symplectic(chart2):
    tc = cotangent_frame(chart2)
    return GCSContext(chart2, GradedElement.zero(tc), u=symplectic_spinor(chart2))


@pytest.fixture(scope="session")
def ctx_complex(chart2):
    tc = cotangent_frame(chart2)
    return GCSContext(chart2, GradedElement.zero(tc), u=complex_spinor(chart2))


@pytest.fixture(scope="session")
def ctx_rescaled(chart2):
    tc = cotangent_frame(chart2)
    g = chart2.one() + chart2.coordinate(0) * chart2.coordinate(0)
    u = symplectic_spinor(chart2).scale(g)
    return GCSContext(chart2, GradedElement.zero(tc), u=u)


@pytest.fixture(scope="session")
def ctx_twisted(chart4):
    u, h = twisted_b_field_data(chart4)
    return GCSContext(chart4, h, u=u)


@pytest.fixture(scope="session")
def all_positive_contexts(ctx_symplectic, ctx_complex, ctx_rescaled, ctx_twisted):
    return {
        "symplectic-r2": ctx_symplectic,
        "complex-r2": ctx_complex,
        "rescaled-symplectic-r2": ctx_rescaled,
        "twisted-b-field-r4": ctx_twisted,
    }
