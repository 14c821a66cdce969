"""
The Renyi spectrum of an invariant law
======================================

R_alpha = log(∫ f^alpha) / (1 - alpha) is a nonincreasing curve in alpha.
Its value at alpha = 1 is the Shannon entropy and its slope there gives
the Song measure S = Var(log f(X)) = -2 dR/dalpha.
"""
import numpy as np

from diffentropy.density import laplace, student_t
from diffentropy.models import HyperbolicParams, OUParams, SkewTParams
from diffentropy.spectrum import compute_spectrum, song_from_spectrum, tail_order

# The Ornstein-Uhlenbeck process dX = -theta (X - mu) dt + sqrt(2 theta) dW
# has a standard normal invariant law whatever theta and mu are.
ou = OUParams(theta=2.0, mu=0.0)
table = compute_spectrum(ou, [0.5, 2.0, 4.0, 8.0])
for row in table.rows:
    print(f"alpha = {row.alpha:4.1f}   R = {row.renyi:.10f}   ({row.method}{', ' + row.flag if row.flag else ''})")

# Closed forms and quadrature give the same curve.
quad = compute_spectrum(ou, [0.5, 2.0, 4.0, 8.0], prefer="quadrature")
print("largest closed/quadrature gap:", np.max(np.abs(table.values - quad.values)))

# The slope at alpha = 1.  For any normal law Var(X^2 / 2) = 1/2.
print("Song of the normal law:", song_from_spectrum(ou).value)

# Heavy tails make small orders infinite.  The Cauchy law (skew-t with
# gamma = beta = 1/2) has ∫ f^alpha = ∞ for alpha <= 1/2; the spectrum
# keeps those rows and flags them.
cauchy = SkewTParams(0.5, 0.5)
for row in compute_spectrum(cauchy, [0.3, 0.5, 0.8, 2.0]).rows:
    print(f"alpha = {row.alpha:3.1f}   R = {row.renyi}   flag = {row.flag or '-'}")

# The Song measure orders laws by tail weight: t with 6 degrees of
# freedom precedes the Laplace law.
print("S(t6) =", SkewTParams(3.0, 3.0).song())
print("t6 vs Laplace:", tail_order(student_t(6), laplace()))

# For the hyperbolic law the slope of the spectrum and Var(log f) agree.
hyp = HyperbolicParams(gamma=1.0, beta=0.0, delta=1.0)
print("hyperbolic Song, closed form:", hyp.song())
print("hyperbolic Song, from slope: ", song_from_spectrum(hyp).value)
