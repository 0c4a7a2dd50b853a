"""Independent slow references used as test oracles.

Everything here is plain Python written straight from the model equations,
without sharing code with the package.
"""
import math


def nr(x, H):
    x = max(x, 0.0)
    return 100.0 * x * x / ((10.0 + H) ** 2 + x * x)


def step(x):
    return 1.0 if x >= 0 else 0.0


def logistic(x, k, theta):
    return 1.0 / (1.0 + math.exp(-(x - theta) / k))


def wilson(y, s1, s2, g=0.45, h=0.47, te=20.0, th=900.0, ti=11.0):
    E1, H1, I1, E2, H2, I2 = y
    return [(-E1 + nr(s1 - g * I2, H1)) / te, (-H1 + h * E1) / th, (-I1 + E1) / ti,
            (-E2 + nr(s2 - g * I1, H2)) / te, (-H2 + h * E2) / th, (-I2 + E2) / ti]


def laing_chow(y, s1, s2, alpha=0.35, beta=0.7, phi_a=0.6, phi_d=0.6, ta=20.0, td=40.0, tu=1.0):
    u1, a1, g1, u2, a2, g2 = y
    f1 = step(alpha * u1 * g1 - beta * u2 * g2 - a1 + s1)
    f2 = step(alpha * u2 * g2 - beta * u1 * g1 - a2 + s2)
    return [(-u1 + f1) / tu, (-a1 + phi_a * f1) / ta, (1 - g1 - g1 * phi_d * f1) / td,
            (-u2 + f2) / tu, (-a2 + phi_a * f2) / ta, (1 - g2 - g2 * phi_d * f2) / td]


def lc_adaptation(y, s1, s2, beta=0.9, g=0.5, ta=100.0, tu=1.0, k=0.1, theta=0.2):
    u1, a1, u2, a2 = y
    return [(-u1 + logistic(-beta * u2 - g * a1 + s1, k, theta)) / tu, (-a1 + u1) / ta,
            (-u2 + logistic(-beta * u1 - g * a2 + s2, k, theta)) / tu, (-a2 + u2) / ta]


def lc_depression(y, s1, s2, beta=0.9, gamma=0.5, td=100.0, tu=1.0, k=0.1, theta=0.2):
    u1, g1, u2, g2 = y
    return [(-u1 + logistic(-beta * u2 * g2 + s1, k, theta)) / tu, (1 - g1 - gamma * u1 * g1) / td,
            (-u2 + logistic(-beta * u1 * g1 + s2, k, theta)) / tu, (1 - g2 - gamma * u2 * g2) / td]


def kalarickal(y, s1, s2, b21=0.0, b12=0.0, w1=0.25, w2=0.25, w12=250.0, w21=250.0,
               c1=0.01, c2=0.008, c3=0.083):
    x1, y21, x2, y12 = y
    r1, r2 = max(x1, 0.0), max(x2, 0.0)
    return [-x1 + (1 - x1) * w1 * s1 - (c1 + x1) * w21 * y21 * r2,
            c2 * ((1 - y21) - c3 * r2 * w21 * y21) + b21,
            -x2 + (1 - x2) * w2 * s2 - (c1 + x2) * w12 * y12 * r1,
            c2 * ((1 - y12) - c3 * r1 * w12 * y12) + b12]


def scan_dominance(times, a1, a2, delta, t_transient):
    """Sample-by-sample hysteresis scan returning ``(channel, start, end, complete)``."""
    h = times[1] - times[0]
    end = times[-1] + h
    intervals = []
    current = None
    for t, x1, x2 in zip(times, a1, a2):
        if t < t_transient:
            continue
        m = x1 - x2
        if m > delta and current != 1:
            current = 1
            intervals.append([1, t])
        elif m < -delta and current != 2:
            current = 2
            intervals.append([2, t])
    out = []
    for k, (c, s) in enumerate(intervals):
        e = intervals[k + 1][1] if k + 1 < len(intervals) else end
        out.append((c, s, e, 0 < k < len(intervals) - 1))
    return out


def scan_stats(intervals, t0, t1):
    length = t1 - t0
    durs = {1: [], 2: []}
    total = {1: 0.0, 2: 0.0}
    for c, s, e, complete in intervals:
        total[c] += e - s
        if complete:
            durs[c].append(e - s)
    switches = len(intervals) - 1 if intervals else 0
    mean = {c: (sum(v) / len(v) if v else None) for c, v in durs.items()}
    return {"mean_duration_1": mean[1], "mean_duration_2": mean[2],
            "alternation_rate": switches / (length / 1000.0),
            "predominance_1": total[1] / length, "predominance_2": total[2] / length,
            "n_switches": switches}
