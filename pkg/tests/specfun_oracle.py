"""Extended-precision reference for the exponential integral, test-only.

Convergent series gamma + ln|x| + sum x^k/(k*k!) summed with enough digits
to absorb the alternating-series cancellation; optimally truncated
asymptotic expansion for large |x| where the series would need hundreds of
digits.
"""
import mpmath as mp


def ei_oracle(x: float) -> float:
    s = abs(float(x))
    assert x < 0
    if s <= 50.0:
        with mp.workdps(int(40 + 0.5 * s)):
            xx = mp.mpf(x)
            total = mp.euler + mp.log(abs(xx))
            term = mp.mpf(1)
            k = 1
            while True:
                term *= xx / k
                contrib = term / k
                total += contrib
                if abs(contrib) < mp.mpf(10) ** (-mp.mp.dps) * (abs(total) + 1):
                    break
                k += 1
            return float(total)
    # Ei(-s) = -e^-s/s * sum_k (-1)^k k!/s^k, truncated at the smallest term.
    with mp.workdps(40):
        ss = mp.mpf(s)
        acc = mp.mpf(0)
        term = mp.mpf(1)
        k = 0
        while True:
            acc += term
            nxt = term * (-(k + 1)) / ss
            if abs(nxt) >= abs(term):
                break
            term = nxt
            k += 1
            if k > 400:
                break
        return float(-mp.exp(-ss) / ss * acc)
