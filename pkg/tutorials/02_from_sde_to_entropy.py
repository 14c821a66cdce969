"""
From drift and diffusion coefficients to entropies
==================================================

An ergodic diffusion dX = b(X) dt + sigma(X) dW has invariant density
f = m / G, with speed density m = 1 / (sigma^2 s) and scale density
s(x) = exp(-2 ∫ b / sigma^2).  Nothing here needs a closed form.
"""
import math

from diffentropy.expr import parse_expression
from diffentropy.measures import renyi_numeric, shannon_numeric, song_numeric
from diffentropy.models import CIRParams
from diffentropy.sde import DiffusionSpec, ergodicity_check, invariant_density, scale_function

# A double-well drift with state-dependent noise.
drift = parse_expression("x - x^3")
sigma2 = parse_expression("1 + x^2 / 4")
spec = DiffusionSpec(drift, sigma2, (-math.inf, math.inf), reference=0.0, scale=1.0)

report = ergodicity_check(spec)
print("verdict:", report.verdict)

f = invariant_density(spec)
print("log G =", f.log_G)
print("f(0) = {:.6f}, f(1) = {:.6f}".format(f.pdf(0.0), f.pdf(1.0)))
print("R_2 =", renyi_numeric(f, 2.0).value)
print("R_1 =", shannon_numeric(f).value)
print("S   =", song_numeric(f).value)

# The scale function of the CIR process dX = -theta (X - mu) dt + sqrt(2 theta X) dW
# is x^-mu e^(x - 1) when anchored at 1.
cir = CIRParams(mu=0.5)
s = scale_function(cir.diffusion(reference=1.0), 0.25)
print("CIR scale at 0.25:", s, "expected", 0.25 ** -0.5 * math.exp(-0.75))

# With mu = 0.5 the Gamma law is still a proper density, but the boundary
# at zero is attainable, so the process is not ergodic without a
# reflection convention.
print("CIR mu = 0.5:", ergodicity_check(cir.diffusion(reference=1.0)).verdict)
print("CIR mu = 2:  ", ergodicity_check(CIRParams(mu=2.0).diffusion(reference=1.0)).verdict)
