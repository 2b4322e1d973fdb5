"""Full pipeline on F(z) = [1, 1/(z+1)] with closed-form comparisons."""
import numpy as np

from zeromodules import innerfact as inf
from zeromodules import zeromod as zm
from zeromodules.statespace import StateSpace, eval_grid, evaluate

R2 = np.sqrt(2.0)


def main():
    F = StateSpace([[-1]], [[0, 1]], [[1]], [[1, 0]], labels={"name": "[1, 1/(z+1)]"})
    rep = zm.zero_report(F)
    print(f"dims (Z, Zinf, Wker, WIm) = {rep.dims()}, kernel indices {rep.kernel_indices}")

    fac = inf.squaring(F)
    rf = fac.right
    print(f"sigma         = {rf.cert.sigma[0, 0]:.15f}   (sqrt2 - 1 = {R2 - 1:.15f})")
    print(f"K pole        = {rf.K.A[0, 0]:.15f}   (-sqrt2)")
    print(f"F_r realization: A={rf.F_r.A[0, 0].real:g} B={rf.F_r.B[0, 0].real:.12f} "
          f"C={rf.F_r.C[0, 0].real:g} D={rf.F_r.D[0, 0].real:g}")
    err = max(abs(evaluate(rf.F_r, z)[0, 0] - (z - R2) / (z + 1)) for z in eval_grid(F))
    print(f"max |F_r - (z - sqrt2)/(z + 1)| on grid = {err:.2e}")
    print(f"zeros of F_r  = {zm.zero_report(rf.F_r).finite_zeros}")
    print(f"zeros of F_rl predicted {fac.predicted_zeros}, degree {F.n} -> {fac.F_rl.n}")
    for name, d in inf.certificate_defects(fac).items():
        print(f"  {name:<22} {d['defect']:.2e}  (scale {d['scale']:.2f})")


if __name__ == "__main__":
    main()
