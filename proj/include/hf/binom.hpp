#ifndef HF_BINOM_HPP
#define HF_BINOM_HPP

#include <gmpxx.h>

#include "hf/util.hpp"

namespace hf {

// C(p,q) with the zero-extension convention: 0 whenever q < 0 or q > p.
mpz_class exact_binom(long long p, long long q);

// Natural log of a positive big integer.  The integer part of log2 comes from
// the exact bit length; the fractional part from a 128-bit mantissa, so the
// double result is correct to its last few ulps even for million-bit inputs.
class LogValue {
 public:
  static LogValue of(const mpz_class& v);  // v > 0
  double value() const { return v_; }

 private:
  explicit LogValue(double v) : v_(v) {}
  double v_;
};

double ln_exact(const mpz_class& v);       // shorthand for LogValue::of(v).value()
double ln_binom(long long p, long long q); // ln C(p,q); p >= 0, 0 <= q <= p
double ln_factorial(long long n);

// C(p,r)*C(p-r,q-r) == C(p,q)*C(q,r), checked exactly.
bool check_identity_basic1(long long p, long long q, long long r);

// sum_j C(p-r,j)*C(r,q-j) == C(p,q), exact, all j (zero-extended).
bool check_identity_vandermonde(long long p, long long q, long long r);

// S(x) = sum_{j>=1} x^j/(j(j+1)), summed until the tail bound drops below tol.
double s_function(double x, double tol = 1e-13);

struct ApproxReport {
  double value;      // q(ln(p/q)+1-S(q/p)) + (1/2)ln(p/(2*pi*q*(p-q)))
  double exact;      // ln C(p,q)
  double abs_error;  // |value - exact|
  double bound;      // K / min(q, p-q), K from calibration
};

ApproxReport approx_ln_binom(long long p, long long q);  // 1 <= q < p

// l*ln(1 - m/(n-l)) <= ln C(n-m,l) - ln C(n,l) <= -l*m/n, for l+m < n.
bool check_lemma_basic2(long long n, long long m, long long l);

// ln C(l-m,m-j) + ln C(m,j) <= ln C(l,m) - j*ln(j*l/m^2) + j + ln j + K,
// for m^2 <= l and 1 <= j <= m.
bool check_lemma_basic3(long long l, long long m, long long j, double K);
double basic3_residual(long long l, long long m, long long j);

// |ln C(p+q,r) - ln C(p,<rp/(p+q)>) - ln C(q,<rq/(p+q)>)| <= K * ln(p+q),
// where <.> rounds half-to-even.
bool check_proportional(long long p, long long q, long long r, double K);
double proportional_residual(long long p, long long q, long long r);
long long round_half_even(long long num, long long den);  // nearest integer to num/den

struct CalibConstants {
  double lemma22_K;       // error*min(q,p-q) sup over 2<=q<p<=2000
  double lemma25_K;       // basic3 residual sup over m^2<=l<=400, j in [m]
  double proportional_K;  // proportional residual sup over p,q<=200
};

// Values reproduced by calibrate(); regenerate with `hamming-forge binom-calibrate`.
extern const CalibConstants kCalibDefaults;

const CalibConstants& calib_constants();
void set_calib_constants(const CalibConstants& c);

CalibConstants calibrate(long long max_p = 2000, long long max_l = 400,
                         long long max_pq = 200);

}  // namespace hf

#endif
