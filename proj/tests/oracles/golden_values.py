"""Independent high-precision evaluation of the frozen constants used in the C++ tests.

Run with: python3 tests/oracles/golden_values.py
"""
from mpmath import mp, mpf, sqrt, log, exp, floor, cos, pi

mp.dps = 50


def parameters(theta, xi, alpha, d):
    theta, xi, alpha = mpf(theta), mpf(xi), mpf(alpha)
    q_lo, q_hi = 3 * d / (2 * alpha - 1), (theta - mpf(9) / 2 * d) / 2
    q = (q_lo + q_hi) / 2
    p = ((2 * alpha - 1) * q - 3 * d) / 2
    g1_hi = min(1 + p / (p + 2 * d), (2 * theta - 4 * d) / (5 * d + 4 * q))
    gamma1 = (1 + g1_hi) / 2
    gamma = (1 + xi ** (-mpf(1) / 3)) / 2
    lo, hi = gamma ** 2 * xi, 1 / gamma
    zeta = lo + (hi - lo) / 3
    beta = lo + 2 * (hi - lo) / 3
    tau_lo = max((1 + gamma1) / (2 * gamma1), (1 + gamma * beta) / 2,
                 ((gamma - 1) * beta + 1) / gamma)
    tau = (tau_lo + 1) / 2
    s_lo = max(gamma * beta, 1 - 2 * gamma * (tau - (1 + gamma * beta) / 2))
    s = (s_lo + 1) / 2
    return dict(q=q, p=p, gamma1=gamma1, gamma=gamma, zeta=zeta, beta=beta, tau=tau, s=s)


def msa3(Y, s, d, zeta, logP0, L0, kmax):
    N = int(floor(Y ** s))
    logA = (N + 1) * d * log(2 * Y)
    logP = logP0
    L = mpf(L0)
    rows = [(0, L, logP, -L ** zeta)]
    for k in range(1, kmax + 1):
        L = L * Y
        a = logA + (N + 1) * logP
        b = log(mpf(1) / 2) - L ** zeta
        m = max(a, b)
        logP = m + log(exp(a - m) + exp(b - m))
        rows.append((k, L, logP, -L ** zeta))
    K0 = next((r[0] for r in rows if r[2] <= r[3]), None)
    return N, rows, K0


if __name__ == "__main__":
    ps = parameters(12, mpf(3) / 10, 1, 1)
    for k, v in ps.items():
        print(f"{k} = {mp.nstr(v, 17)}")
    tau_t = (1 + ps["tau"]) / 2
    print("Ltau_tilde(200) =", mp.nstr(mpf(200) ** tau_t, 12), "tau~", mp.nstr(tau_t, 12))
    print("Ltau(100, 0.99) =", mp.nstr(mpf(100) ** mpf("0.99"), 12))
    # 2x2 analytic case
    lam_m = (1 - sqrt(mpf("1.04"))) / 2
    lam_p = (1 + sqrt(mpf("1.04"))) / 2
    # eigenvector of lam_m: (H - lam) v = 0 -> -lam v0 - 0.1 v1 = 0 -> v1 = -10 lam v0
    v1 = -10 * lam_m
    nrm = sqrt(1 + v1 ** 2)
    print("lam- =", mp.nstr(lam_m, 17), "lam+ =", mp.nstr(lam_p, 17))
    print("|psi-(0)| =", mp.nstr(1 / nrm, 17), "|psi-(1)| =", mp.nstr(abs(v1) / nrm, 17))
    # MSA1 example values
    A = mpf(800) ** 2
    print("P1(P0=0) =", mp.nstr(mpf(1) / 2 * mpf(8000) ** -5, 17))
    print("P1(P0=3.5e-7) =", mp.nstr(A * mpf("3.5e-7") ** 2 + mpf(1) / 2 * mpf(8000) ** -5, 17))
    # initial-scale bound values
    for L, eps in [(200, mpf(1) / 4 * mpf(200) ** -3), (100, mpf(1) / 4 * mpf(10) ** -6)]:
        th = floor(mpf(L) / 20) / log(L) * log(1 + mpf(L) ** -3 / (2 * eps))
        pl = 1 - mpf(1) / 2 * (L + 1) ** 2 * (8 * eps + 2 * mpf(L) ** -3)
        print(f"theta_eps_L(L={L}) = {mp.nstr(th, 17)}  prob_lower = {mp.nstr(pl, 17)}")
    pl = 1 - mpf(1) / 2 * 101 ** 2 * (8 * mpf(1) / 4 * mpf(10) ** -6 + 2 * mpf(10) ** -6)
    print("init pass threshold =", mp.nstr(pl - 3 * sqrt(pl * (1 - pl) / 500), 17))
    Y = 2 * (1 + mpf("0.2") + 1)
    ls = 1 - Y * mpf(100) ** -3 * 101 ** 2
    print("Y_eps0 =", Y, " level-spacing poly bound =", mp.nstr(ls, 17),
          " threshold =", mp.nstr(ls - 3 * sqrt(ls * (1 - ls) / 500), 17))
    print("level-spacing exp raw =", mp.nstr(1 - Y * exp(-10) * 101 ** 2, 17))
    # MSA2 mass example
    g1, q, tau, kappa, L0 = mpf("1.04"), mpf("3.375"), mpf("0.99"), mpf("0.5"), mpf(10) ** 4
    rho = min((1 - tau) / 2, g1 * tau - 1, tau - kappa)
    m = mpf("0.1")
    ms = [m]
    for j in range(20):
        m = m * (1 - g1 * q * L0 ** (-rho * g1 ** j))
        ms.append(m)
    print("msa2 rho =", mp.nstr(rho, 17), " m_1 =", mp.nstr(ms[1], 17), " m_20 =", mp.nstr(ms[20], 17))
    # MSA3 golden tuple: s = 0.1 -> Y >= 400^(1/0.9); zeta < s; P0 = e^-15.5 above e^-L0^zeta
    Y3 = mpf(800)
    assert Y3 >= mpf(400) ** (1 / (1 - mpf("0.1")))
    N, rows, K0 = msa3(Y3, mpf("0.1"), 1, mpf("0.05"), mpf("-15.5"), mpf(10) ** 24, 64)
    bound = -(log(2) + (N + 1) * 1 * log(2 * Y3)) / N
    print("msa3 N =", N, " log P0 bound =", mp.nstr(bound, 17), " K0 =", K0)
    for r in rows[:K0 + 2]:
        print("   ", r[0], mp.nstr(r[1], 6), mp.nstr(r[2], 17), mp.nstr(r[3], 17))
    # Big-Y tuple from the validated parameter set
    s_, z_ = ps["s"], ps["zeta"]
    Yb = mpf(400) ** (1 / (1 - s_))
    Nb = int(floor(Yb ** s_))
    logbound = -(log(2) + (Nb + 1) * log(2 * Yb)) / Nb
    N2, rows2, K02 = msa3(Yb, s_, 1, z_, logbound - 1, 2, 6)
    print("big Y =", mp.nstr(Yb, 17), "N =", mp.nstr(mpf(Nb), 17), " logP0 =", mp.nstr(logbound - 1, 17), " K0 =", K02)
    for r in rows2[:4]:
        print("   ", r[0], mp.nstr(r[1], 6), mp.nstr(r[2], 17), mp.nstr(r[3], 17))
