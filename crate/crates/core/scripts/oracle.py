"""Independent reference values for the integration tests.

Writes tests/golden/*.csv (state amplitudes from scipy's DOP853 at tight
tolerance) and prints pulse areas computed with mpmath adaptive quadrature.

    python3 scripts/oracle.py
"""

import pathlib

import mpmath as mp
import numpy as np
from scipy.integrate import solve_ivp

GOLDEN = pathlib.Path(__file__).resolve().parent.parent / "tests" / "golden"


def envelope(t, q, tau):
    return np.tanh(10**q * (t + tau) / tau) - np.tanh(10**q * (t - tau) / tau)


def propagate(scheme, w_ab, w_cb, rabi_s, rabi_p, nu_s, nu_p, q, tau, n_out=201):
    w_p = w_cb if scheme == "V" else w_ab - w_cb
    t0, t1 = -1.5 * tau, 1.5 * tau

    def rhs(t, y):
        env = envelope(t, q, tau)
        s = -rabi_s * env * np.cos(nu_s * t) * np.exp(1j * w_ab * t)
        p = -rabi_p * env * np.cos(nu_p * t) * np.exp(1j * w_p * t)
        a, b, c = y[:3] + 1j * y[3:]
        if scheme == "V":
            d = -1j * np.array([s * b, np.conj(s) * a + np.conj(p) * c, p * b])
        else:
            d = -1j * np.array([s * b + p * c, np.conj(s) * a, np.conj(p) * a])
        return np.concatenate([d.real, d.imag])

    ts = np.linspace(t0, t1, n_out)
    sol = solve_ivp(rhs, (t0, t1), [0, 1, 0, 0, 0, 0], t_eval=ts, method="DOP853",
                    rtol=1e-13, atol=1e-13, max_step=0.01)
    assert sol.success
    return ts, sol.y


def write_golden(name, ts, y):
    GOLDEN.mkdir(parents=True, exist_ok=True)
    with open(GOLDEN / f"{name}.csv", "w") as f:
        f.write("t,re_a,re_b,re_c,im_a,im_b,im_c\n")
        for k, t in enumerate(ts):
            f.write(",".join(repr(float(v)) for v in (t, *y[:, k])) + "\n")


def area(rabi, nu, w, q, tau, t_end):
    mp.mp.dps = 30
    f = lambda t: rabi * (mp.tanh(10**q * (t + tau) / tau) - mp.tanh(10**q * (t - tau) / tau)) \
        * mp.cos(nu * t) * mp.expj(w * t)
    pts = mp.linspace(-1.5 * tau, t_end, 61)
    return mp.quad(f, pts)


if __name__ == "__main__":
    write_golden("fig2_v", *propagate("V", 12, 10, 0.6, 0.5, 3, 2, 0, 10))
    write_golden("fig3_v", *propagate("V", 12, 10, 0.6, 0.5, 3, 2, 1, 10))
    write_golden("fig2_lambda", *propagate("L", 12, 10, 0.6, 0.5, 3, 2, 0, 10))
    for label, rabi, nu, w in [("s", 0.6, 3, 12), ("p", 0.5, 2, 10)]:
        for t_end in (-5, 0, 15):
            z = area(rabi, nu, w, 0, 10, t_end)
            print(f"{label} t={t_end}: {mp.nstr(z.real, 17)} {mp.nstr(z.imag, 17)}")
