"""
Generator matrices and commutation relations
=============================================

Three algebras are checked numerically in a truncated eigenbasis: su(1,1)
for the constant-mass oscillator, the quadratic Jacobi algebra of the
deformed one, and a deformed su(1,1) built from it.  The truncated matrices
satisfy each relation on a leading "trusted" block, so only that block is
compared.
"""

import numpy as np

import pdmosc
from pdmosc.algebra import commutator

# %%
# su(1,1): K0 is diagonal and K+ shifts n -> n + 1.
p = pdmosc.OscParams(1.0, 0.0, 0.0)
K0 = pdmosc.build_matrix("K0_const", p, 8)
Kp = pdmosc.build_matrix("Kplus_const", p, 8)
np.set_printoptions(precision=4, suppress=True, linewidth=110)
print("K0 diagonal:", np.diag(K0.entries))
print("K+ subdiagonal:", np.diag(Kp.entries, -1))

# %%
# [K0, K+] = K+ on the trusted block.
C = commutator(K0, Kp)
t = C.trusted
print(f"trusted block {t}x{t}, max |[K0,K+] - K+| =",
      np.max(np.abs(C.entries[:t, :t] - Kp.entries[:t, :t])))

# %%
# The full suites produce structured reports.  Every relation carries its
# residual and tolerance.
for rep in (pdmosc.verify_su11(p, 20), pdmosc.verify_qj3(pdmosc.OscParams(1.0, 0.5, 1.0), 24)):
    for r in rep.residuals:
        print(f"  {r.relation_id:<60s} {r.residual:.2e}  <= {r.tolerance:.0e}  {r.status}")

# %%
# Deformed su(1,1): the Casimir is diagonal and n-independent.  Its value
# depends on alpha/lambda and has no alpha^0 analogue of the last term.
q = pdmosc.OscParams(1.0, 1.0, 1.0)
rep = pdmosc.verify_deformed(q, 24)
print("closed-form Casimir:", rep.details["casimir_value"])
print("diagonal entries   :", np.array(rep.details["casimir_diagonal"][:6]))
print("suite passed:", rep.passed)

# %%
# As alpha -> 0 the deformed generators approach the su(1,1) ones linearly
# in alpha: D(alpha)/alpha settles to a constant.
lim = pdmosc.verify_limit(p, (0.1, 0.01, 0.001), 20)
for a, d in zip(lim.details["alphas"], lim.details["D"]):
    print(f"alpha={a:<6g} D={d:.4e}  D/alpha={d / a:.4f}")

# %%
# The relation [K2, K3] = 8 alpha (1 - K2^2) vanishes with alpha, but not at
# a single rate.  At moderate alpha, dividing alpha by 4 divides the norm by
# about 4.  For small alpha, 1 - t^2 ~ 4 alpha r^2 contributes another power,
# so the ratio climbs towards 16.
prev = None
for a in (0.04, 0.01, 0.0025, 0.000625):
    q = pdmosc.OscParams(1.0, a, 0.0)
    K2 = pdmosc.build_matrix("Ktilde2", q, 16).entries
    K3 = pdmosc.build_matrix("Ktilde3", q, 16).entries
    norm = np.linalg.norm((K2 @ K3 - K3 @ K2)[:13, :13])
    ratio = "" if prev is None else f"  ratio per factor 4 in alpha: {prev / norm:.2f}"
    print(f"alpha={a:<9g} ||[K2,K3]|| = {norm:.4e}{ratio}")
    prev = norm
