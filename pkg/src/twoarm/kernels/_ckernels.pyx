# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled inner loops for the sequential strategies.

Every kernel draws from the numpy ``Generator`` it is given through the
BitGenerator C interface, consuming the stream in exactly the order used by
:mod:`twoarm.kernels._pykernels`, so the two backends agree draw for draw.
"""

from cpython.pycapsule cimport PyCapsule_GetPointer
from libc.math cimport ceil, fabs, log
from numpy.random cimport bitgen_t
from numpy.random.c_distributions cimport random_standard_normal


cdef bitgen_t* _bitgen(object gen) except NULL:
    return <bitgen_t*> PyCapsule_GetPointer(gen.bit_generator.capsule, "BitGenerator")


cdef inline double _bern_div(double x, double m) noexcept nogil:
    # KL(B(x), B(m)) for 0 < m < 1
    cdef double out = 0.0
    if x > 0.0:
        out += x * log(x / m)
    if x < 1.0:
        out += (1.0 - x) * log((1.0 - x) / (1.0 - m))
    return out


def pair_gaussian(gen, double mu1, double sd1, double mu2, double sd2,
                  const double[::1] thr, long cap):
    """Paired Gaussian draws until ``|sum(x_s - y_s)| > thr[k]`` after ``k`` pairs.

    Returns ``(tau, diff_sum, stopped)``.
    """
    cdef bitgen_t* rng = _bitgen(gen)
    cdef long k, kmax = cap // 2
    cdef double d = 0.0, x, y
    cdef bint stopped = False
    if thr.shape[0] <= kmax:
        raise ValueError("threshold table shorter than cap/2 + 1")
    k = 0
    with gen.bit_generator.lock, nogil:
        while k < kmax:
            k += 1
            x = mu1 + sd1 * random_standard_normal(rng)
            y = mu2 + sd2 * random_standard_normal(rng)
            d += x - y
            if fabs(d) > thr[k]:
                stopped = True
                break
    return 2 * k, d, stopped


def alpha_gaussian(gen, double mu1, double sd1, double mu2, double sd2, double alpha,
                   const double[::1] thr, long cap):
    """Deterministic alpha-schedule sampling until ``|mean1 - mean2| > thr[t]``.

    Returns ``(tau, n1, sum1, sum2, stopped)``.
    """
    cdef bitgen_t* rng = _bitgen(gen)
    cdef long t = 0, n1 = 0, n2 = 0
    cdef double s1 = 0.0, s2 = 0.0, z
    cdef bint stopped = False
    if thr.shape[0] <= cap:
        raise ValueError("threshold table shorter than cap + 1")
    with gen.bit_generator.lock, nogil:
        while t < cap:
            t += 1
            z = random_standard_normal(rng)
            if ceil(alpha * <double>t) == ceil(alpha * <double>(t - 1)):
                s2 += mu2 + sd2 * z
                n2 += 1
            else:
                s1 += mu1 + sd1 * z
                n1 += 1
            if n1 > 0 and n2 > 0:
                if fabs(s1 / n1 - s2 / n2) > thr[t]:
                    stopped = True
                    break
    return t, n1, s1, s2, stopped


def pair_bernoulli_kl(gen, double p1, double p2, const double[::1] thr, long cap):
    """Paired Bernoulli draws until ``t * I(mean1, mean2) > thr[t/2]``.

    ``I(x, y)`` averages ``KL(B(x), B(m))`` and ``KL(B(y), B(m))`` at the
    midpoint ``m``. Returns ``(tau, count1, count2, stopped)``.
    """
    cdef bitgen_t* rng = _bitgen(gen)
    cdef long k = 0, kmax = cap // 2, c1 = 0, c2 = 0
    cdef double x, y, m, stat
    cdef bint stopped = False
    if thr.shape[0] <= kmax:
        raise ValueError("threshold table shorter than cap/2 + 1")
    with gen.bit_generator.lock, nogil:
        while k < kmax:
            k += 1
            if rng.next_double(rng.state) < p1:
                c1 += 1
            if rng.next_double(rng.state) < p2:
                c2 += 1
            if c1 != c2:
                x = <double>c1 / k
                y = <double>c2 / k
                m = 0.5 * (x + y)
                stat = k * (_bern_div(x, m) + _bern_div(y, m))
                if stat > thr[k]:
                    stopped = True
                    break
    return 2 * k, c1, c2, stopped


def static_sums(gen, int bernoulli, double a1, double b1, double a2, double b2,
                long n1, long n2):
    """``n1`` draws of arm 1 then ``n2`` of arm 2; returns the two sums.

    Gaussian arms are ``(mean, sd)`` pairs; Bernoulli arms use ``a`` as the mean.
    """
    cdef bitgen_t* rng = _bitgen(gen)
    cdef long i
    cdef double s1 = 0.0, s2 = 0.0
    with gen.bit_generator.lock, nogil:
        if bernoulli:
            for i in range(n1):
                if rng.next_double(rng.state) < a1:
                    s1 += 1.0
            for i in range(n2):
                if rng.next_double(rng.state) < a2:
                    s2 += 1.0
        else:
            for i in range(n1):
                s1 += a1 + b1 * random_standard_normal(rng)
            for i in range(n2):
                s2 += a2 + b2 * random_standard_normal(rng)
    return s1, s2
