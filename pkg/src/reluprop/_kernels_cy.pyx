# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled twin of the pure-Python kernel core.

Same algorithms, coefficients and operation order as
:mod:`reluprop._kernels_pure`; see that module for the algorithm sources.
Compiled without FMA contraction so both twins round identically.
"""

from libc.math cimport exp as c_exp, log as c_log, sqrt as c_sqrt, \
    sin as c_sin, asin as c_asin, fabs, INFINITY
from libc.stdint cimport uint64_t
from libc.string cimport memcpy

import numpy as np

cdef double SQRT2 = 1.4142135623730951
cdef double INV_SQRT_2PI = 0.3989422804014327
cdef double TWO_PI = 6.283185307179586
cdef double SQRT_TWO_PI = 2.5066282746310002

# ---------------------------------------------------------------------------
# erf / erfc (SunPro rational approximations)
# ---------------------------------------------------------------------------

cdef double _ERX = 8.45062911510467529297e-01

cdef double PP0 = 1.28379167095512558561e-01
cdef double PP1 = -3.25042107247001499370e-01
cdef double PP2 = -2.84817495755985104766e-02
cdef double PP3 = -5.77027029648944159157e-03
cdef double PP4 = -2.37630166566501626084e-05
cdef double QQ1 = 3.97917223959155352819e-01
cdef double QQ2 = 6.50222499887672944485e-02
cdef double QQ3 = 5.08130628187576562776e-03
cdef double QQ4 = 1.32494738004321644526e-04
cdef double QQ5 = -3.96022827877536812320e-06

cdef double PA0 = -2.36211856075265944077e-03
cdef double PA1 = 4.14856118683748331666e-01
cdef double PA2 = -3.72207876035701323847e-01
cdef double PA3 = 3.18346619901161753674e-01
cdef double PA4 = -1.10894694282396677476e-01
cdef double PA5 = 3.54783043256182359371e-02
cdef double PA6 = -2.16637559486879084300e-03
cdef double QA1 = 1.06420880400844228286e-01
cdef double QA2 = 5.40397917702171048937e-01
cdef double QA3 = 7.18286544141962662868e-02
cdef double QA4 = 1.26171219808761642112e-01
cdef double QA5 = 1.36370839120290507362e-02
cdef double QA6 = 1.19844998467991074170e-02

cdef double RA0 = -9.86494403484714822705e-03
cdef double RA1 = -6.93858572707181764372e-01
cdef double RA2 = -1.05586262253232909814e01
cdef double RA3 = -6.23753324503260060396e01
cdef double RA4 = -1.62396669462573470355e02
cdef double RA5 = -1.84605092906711035994e02
cdef double RA6 = -8.12874355063065934246e01
cdef double RA7 = -9.81432934416914548592e00
cdef double SA1 = 1.96512716674392571292e01
cdef double SA2 = 1.37657754143519042600e02
cdef double SA3 = 4.34565877475229228821e02
cdef double SA4 = 6.45387271733267880336e02
cdef double SA5 = 4.29008140027567833386e02
cdef double SA6 = 1.08635005541779435134e02
cdef double SA7 = 6.57024977031928170135e00
cdef double SA8 = -6.04244152148580987438e-02

cdef double RB0 = -9.86494292470009928597e-03
cdef double RB1 = -7.99283237680523006574e-01
cdef double RB2 = -1.77579549177547519889e01
cdef double RB3 = -1.60636384855821916062e02
cdef double RB4 = -6.37566443368389627722e02
cdef double RB5 = -1.02509513161107724954e03
cdef double RB6 = -4.83519191608651397019e02
cdef double SB1 = 3.03380607434824582924e01
cdef double SB2 = 3.25792512996573918826e02
cdef double SB3 = 1.53672958608443695994e03
cdef double SB4 = 3.19985821950859553908e03
cdef double SB5 = 2.55305040643316442583e03
cdef double SB6 = 4.74528541206955367215e02
cdef double SB7 = -2.24409524465858183362e01


cdef inline double _set_low_word_zero(double x) nogil:
    cdef uint64_t bits
    memcpy(&bits, &x, 8)
    bits &= 0xFFFFFFFF00000000ULL
    memcpy(&x, &bits, 8)
    return x


cdef double _erf_tail_ratio(double ax) nogil:
    cdef double s, r, big_s, z
    s = 1.0 / (ax * ax)
    if ax < 1.0 / 0.35:
        r = RA0 + s * (RA1 + s * (RA2 + s * (RA3 + s * (RA4 + s * (RA5 + s * (RA6 + s * RA7))))))
        big_s = 1.0 + s * (SA1 + s * (SA2 + s * (SA3 + s * (SA4 + s * (SA5 + s * (SA6 + s * (SA7 + s * SA8)))))))
    else:
        r = RB0 + s * (RB1 + s * (RB2 + s * (RB3 + s * (RB4 + s * (RB5 + s * RB6)))))
        big_s = 1.0 + s * (SB1 + s * (SB2 + s * (SB3 + s * (SB4 + s * (SB5 + s * (SB6 + s * SB7))))))
    z = _set_low_word_zero(ax)
    r = c_exp(-z * z - 0.5625) * c_exp((z - ax) * (z + ax) + r / big_s)
    return r / ax


cdef double c_erf(double x) nogil:
    cdef double ax, z, r, s, p, q
    if x != x:
        return x
    if x == INFINITY:
        return 1.0
    if x == -INFINITY:
        return -1.0
    ax = fabs(x)
    if ax < 0.84375:
        if ax < 3.7252902984e-09:
            return x + 1.28379167095512586316e-01 * x
        z = x * x
        r = PP0 + z * (PP1 + z * (PP2 + z * (PP3 + z * PP4)))
        s = 1.0 + z * (QQ1 + z * (QQ2 + z * (QQ3 + z * (QQ4 + z * QQ5))))
        return x + x * (r / s)
    if ax < 1.25:
        s = ax - 1.0
        p = PA0 + s * (PA1 + s * (PA2 + s * (PA3 + s * (PA4 + s * (PA5 + s * PA6)))))
        q = 1.0 + s * (QA1 + s * (QA2 + s * (QA3 + s * (QA4 + s * (QA5 + s * QA6)))))
        if x >= 0.0:
            return _ERX + p / q
        return -_ERX - p / q
    if ax >= 6.0:
        return 1.0 if x > 0.0 else -1.0
    r = _erf_tail_ratio(ax)
    return 1.0 - r if x >= 0.0 else r - 1.0


cdef double c_erfc(double x) nogil:
    cdef double ax, z, r, s, y, p, q
    if x != x:
        return x
    if x == INFINITY:
        return 0.0
    if x == -INFINITY:
        return 2.0
    ax = fabs(x)
    if ax < 0.84375:
        if ax < 1.3877787807814457e-17:
            return 1.0 - x
        z = x * x
        r = PP0 + z * (PP1 + z * (PP2 + z * (PP3 + z * PP4)))
        s = 1.0 + z * (QQ1 + z * (QQ2 + z * (QQ3 + z * (QQ4 + z * QQ5))))
        y = r / s
        if ax < 0.25:
            return 1.0 - (x + x * y)
        r = x * y
        r += x - 0.5
        return 0.5 - r
    if ax < 1.25:
        s = ax - 1.0
        p = PA0 + s * (PA1 + s * (PA2 + s * (PA3 + s * (PA4 + s * (PA5 + s * PA6)))))
        q = 1.0 + s * (QA1 + s * (QA2 + s * (QA3 + s * (QA4 + s * (QA5 + s * QA6)))))
        if x >= 0.0:
            return 1.0 - _ERX - p / q
        return 1.0 + _ERX + p / q
    if ax < 28.0:
        if x < -6.0:
            return 2.0
        r = _erf_tail_ratio(ax)
        return r if x > 0.0 else 2.0 - r
    return 0.0 if x > 0.0 else 2.0


cdef inline double c_std_pdf(double x) nogil:
    return INV_SQRT_2PI * c_exp(-0.5 * x * x)


cdef inline double c_std_cdf(double x) nogil:
    return 0.5 * c_erfc(-x / SQRT2)


# ---------------------------------------------------------------------------
# inverse normal cdf (AS 241 central/near branches, refit far tail)
# ---------------------------------------------------------------------------

cdef double NA0 = 3.3871328727963666080e0
cdef double NA1 = 1.3314166789178437745e2
cdef double NA2 = 1.9715909503065514427e3
cdef double NA3 = 1.3731693765509461125e4
cdef double NA4 = 4.5921953931549871457e4
cdef double NA5 = 6.7265770927008700853e4
cdef double NA6 = 3.3430575583588128105e4
cdef double NA7 = 2.5090809287301226727e3
cdef double NB1 = 4.2313330701600911252e1
cdef double NB2 = 6.8718700749205790830e2
cdef double NB3 = 5.3941960214247511077e3
cdef double NB4 = 2.1213794301586595867e4
cdef double NB5 = 3.9307895800092710610e4
cdef double NB6 = 2.8729085735721942674e4
cdef double NB7 = 5.2264952788528545610e3
cdef double NC0 = 1.42343711074968357734e0
cdef double NC1 = 4.63033784615654529590e0
cdef double NC2 = 5.76949722146069140550e0
cdef double NC3 = 3.64784832476320460504e0
cdef double NC4 = 1.27045825245236838258e0
cdef double NC5 = 2.41780725177450611770e-1
cdef double NC6 = 2.27238449892691845833e-2
cdef double NC7 = 7.74545014278341407640e-4
cdef double ND1 = 2.05319162663775882187e0
cdef double ND2 = 1.67638483018380384940e0
cdef double ND3 = 6.89767334985100004550e-1
cdef double ND4 = 1.48103976427480074590e-1
cdef double ND5 = 1.51986665636164571966e-2
cdef double ND6 = 5.47593808499534494600e-4
cdef double ND7 = 1.05075007164441684324e-9
cdef double NE0 = 6.657904643501107e0
cdef double NE1 = 5.356481985589067e0
cdef double NE2 = 1.7047200769060078e0
cdef double NE3 = 2.7344268350766676e-1
cdef double NE4 = 2.3285409200044457e-2
cdef double NE5 = 1.0145913398439566e-3
cdef double NE6 = 1.9820564078847223e-5
cdef double NE7 = 1.2306257649144374e-7
cdef double NF1 = 5.837155855887163e-1
cdef double NF2 = 1.2845687534644873e-1
cdef double NF3 = 1.325304175808398e-2
cdef double NF4 = 6.498338280508945e-4
cdef double NF5 = 1.3580318876980202e-5
cdef double NF6 = 8.701815920762403e-8


cdef double c_ndtri(double p) nogil:
    cdef double q, r, num, den, val
    q = p - 0.5
    if fabs(q) <= 0.425:
        r = 0.180625 - q * q
        num = NA0 + r * (NA1 + r * (NA2 + r * (NA3 + r * (NA4 + r * (NA5 + r * (NA6 + r * NA7))))))
        den = 1.0 + r * (NB1 + r * (NB2 + r * (NB3 + r * (NB4 + r * (NB5 + r * (NB6 + r * NB7))))))
        return q * num / den
    r = p if q < 0.0 else 1.0 - p
    if r <= 0.0:
        return -INFINITY if q < 0.0 else INFINITY
    r = c_sqrt(-c_log(r))
    if r <= 5.0:
        r = r - 1.6
        num = NC0 + r * (NC1 + r * (NC2 + r * (NC3 + r * (NC4 + r * (NC5 + r * (NC6 + r * NC7))))))
        den = 1.0 + r * (ND1 + r * (ND2 + r * (ND3 + r * (ND4 + r * (ND5 + r * (ND6 + r * ND7))))))
    else:
        r = r - 5.0
        num = NE0 + r * (NE1 + r * (NE2 + r * (NE3 + r * (NE4 + r * (NE5 + r * (NE6 + r * NE7))))))
        den = 1.0 + r * (NF1 + r * (NF2 + r * (NF3 + r * (NF4 + r * (NF5 + r * NF6)))))
    val = num / den
    return -val if q < 0.0 else val


# ---------------------------------------------------------------------------
# bivariate normal pdf / cdf (Genz / Drezner-Wesolowsky)
# ---------------------------------------------------------------------------

cdef double[3] GL_X3 = [0.9324695142031522, 0.6612093864662647, 0.2386191860831970]
cdef double[3] GL_W3 = [0.1713244923791705, 0.3607615730481384, 0.4679139345726904]
cdef double[6] GL_X6 = [0.9815606342467191, 0.9041172563704750, 0.7699026741943050,
                        0.5873179542866171, 0.3678314989981802, 0.1252334085114692]
cdef double[6] GL_W6 = [0.04717533638651177, 0.1069393259953183, 0.1600783285433464,
                        0.2031674267230659, 0.2334925365383547, 0.2491470458134029]
cdef double[10] GL_X10 = [0.9931285991850949, 0.9639719272779138, 0.9122344282513259,
                          0.8391169718222188, 0.7463319064601508, 0.6360536807265150,
                          0.5108670019508271, 0.3737060887154196, 0.2277858511416451,
                          0.07652652113349733]
cdef double[10] GL_W10 = [0.01761400713915212, 0.04060142980038694, 0.06267204833410906,
                          0.08327674157670475, 0.1019301198172404, 0.1181945319615184,
                          0.1316886384491766, 0.1420961093183821, 0.1491729864726037,
                          0.1527533871307259]


cdef inline double c_bvn_pdf(double x, double y, double rho) nogil:
    cdef double omr2 = (1.0 - rho) * (1.0 + rho)
    cdef double q = (x * x - 2.0 * rho * x * y + y * y) / omr2
    return c_exp(-0.5 * q) / (TWO_PI * c_sqrt(omr2))


cdef double c_bvn_cdf(double x, double y, double rho) nogil:
    cdef const double* gx
    cdef const double* gw
    cdef int ng, i, js
    cdef double h, k, hk, bvn, hs, asr, sn, sign
    cdef double ass, a, bs, c, d, b, t, xs, rs

    if fabs(rho) < 0.3:
        gx = GL_X3; gw = GL_W3; ng = 3
    elif fabs(rho) < 0.75:
        gx = GL_X6; gw = GL_W6; ng = 6
    else:
        gx = GL_X10; gw = GL_W10; ng = 10

    h = -x
    k = -y
    hk = h * k
    bvn = 0.0
    if fabs(rho) < 0.925:
        if fabs(rho) > 0.0:
            hs = 0.5 * (h * h + k * k)
            asr = 0.5 * c_asin(rho)
            for i in range(ng):
                for js in range(2):
                    sign = -1.0 if js == 0 else 1.0
                    sn = c_sin(asr * (sign * gx[i] + 1.0))
                    bvn += gw[i] * c_exp((sn * hk - hs) / (1.0 - sn * sn))
            bvn = bvn * asr / TWO_PI
        bvn += c_std_cdf(-h) * c_std_cdf(-k)
        if bvn < 0.0:
            return 0.0
        if bvn > 1.0:
            return 1.0
        return bvn

    if rho < 0.0:
        k = -k
        hk = -hk
    if fabs(rho) < 1.0:
        ass = (1.0 - rho) * (1.0 + rho)
        a = c_sqrt(ass)
        bs = (h - k) * (h - k)
        c = (4.0 - hk) / 8.0
        d = (12.0 - hk) / 16.0
        asr = -0.5 * (bs / ass + hk)
        if asr > -100.0:
            bvn = a * c_exp(asr) * (1.0 - c * (bs - ass) * (1.0 - d * bs / 5.0) / 3.0 + c * d * ass * ass / 5.0)
        if -hk < 100.0:
            b = c_sqrt(bs)
            bvn -= c_exp(-0.5 * hk) * SQRT_TWO_PI * c_std_cdf(-b / a) * b * (1.0 - c * bs * (1.0 - d * bs / 5.0) / 3.0)
        a *= 0.5
        for i in range(ng):
            for js in range(2):
                sign = -1.0 if js == 0 else 1.0
                t = a * (sign * gx[i] + 1.0)
                xs = t * t
                rs = c_sqrt(1.0 - xs)
                asr = -0.5 * (bs / xs + hk)
                if asr > -100.0:
                    bvn += a * gw[i] * c_exp(asr) * (c_exp(-hk * (1.0 - rs) / (2.0 * (1.0 + rs))) / rs - (1.0 + c * xs * (1.0 + d * xs)))
        bvn = -bvn / TWO_PI
    if rho > 0.0:
        bvn += c_std_cdf(-(h if h > k else k))
    else:
        t = c_std_cdf(-h) - c_std_cdf(-k)
        if t < 0.0:
            t = 0.0
        bvn = -bvn + t
    if bvn < 0.0:
        return 0.0
    if bvn > 1.0:
        return 1.0
    return bvn


# ---------------------------------------------------------------------------
# python-visible wrappers
# ---------------------------------------------------------------------------


def erf(double x):
    return c_erf(x)


def erfc(double x):
    return c_erfc(x)


def std_pdf(double x):
    return c_std_pdf(x)


def std_cdf(double x):
    return c_std_cdf(x)


def ndtri(double p):
    return c_ndtri(p)


def bvn_pdf(double x, double y, double rho):
    return c_bvn_pdf(x, y, rho)


def bvn_cdf(double x, double y, double rho):
    return c_bvn_cdf(x, y, rho)


def ndtri_array(p):
    """Elementwise inverse normal cdf over a float64 array (released GIL)."""
    cdef double[::1] src = np.ascontiguousarray(p, dtype=np.float64).ravel()
    out_arr = np.empty(src.shape[0], dtype=np.float64)
    cdef double[::1] dst = out_arr
    cdef Py_ssize_t i, n = src.shape[0]
    with nogil:
        for i in range(n):
            dst[i] = c_ndtri(src[i])
    return out_arr.reshape(np.shape(p))
