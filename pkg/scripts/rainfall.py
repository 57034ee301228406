"""Cloud-seeding example: all three tests plus the quadrature value."""

from lognormal_gpv.paper_tables import RAINFALL_PVALUES, RAINFALL_SEEDED, RAINFALL_UNSEEDED
from lognormal_gpv.pvalues import McSettings, TestRequest, gp_value_quadrature, run_method
from lognormal_gpv.simulation import ALL_METHODS

request = TestRequest(RAINFALL_SEEDED, RAINFALL_UNSEEDED)
print(f"quadrature: {gp_value_quadrature(request):.5f}")
for method in ALL_METHODS:
    res = run_method(method, request, McSettings(10 ** 6, 7))
    print(f"{method.value:<9} p={res.estimate:.5f} se={res.mc_se:.1e} "
          f"ref={RAINFALL_PVALUES[method.value]}")
