#include "hf/binom.hpp"

#include <mpfr.h>

#include <cmath>
#include <numbers>
#include <limits>
#include <vector>

namespace hf {

mpz_class exact_binom(long long p, long long q) {
  if (p < 0) throw PreconditionError("exact_binom: p < 0");
  if (q < 0 || q > p) return 0;
  mpz_class r;
  mpz_bin_uiui(r.get_mpz_t(), static_cast<unsigned long>(p),
               static_cast<unsigned long>(q));
  return r;
}

LogValue LogValue::of(const mpz_class& v) {
  if (v <= 0) throw PreconditionError("LogValue: input not positive");
  mpfr_t x;
  mpfr_init2(x, 128);
  mpfr_set_z(x, v.get_mpz_t(), MPFR_RNDN);
  mpfr_log(x, x, MPFR_RNDN);
  double d = mpfr_get_d(x, MPFR_RNDN);
  mpfr_clear(x);
  return LogValue(d);
}

double ln_exact(const mpz_class& v) { return LogValue::of(v).value(); }

namespace {

// ln k! cached; ln C comes out as a difference of three table entries, which
// keeps the big sweeps cheap (three loads instead of a bignum log per query).
std::vector<double>& lnfact_table() {
  static std::vector<double> t{0.0, 0.0};  // 0!, 1!
  return t;
}
mpz_class& fact_state() {
  static mpz_class f = 1;
  return f;
}

}  // namespace

double ln_factorial(long long n) {
  if (n < 0) throw PreconditionError("ln_factorial: n < 0");
  auto& t = lnfact_table();
  auto& f = fact_state();
  while (static_cast<long long>(t.size()) <= n) {
    f *= static_cast<unsigned long>(t.size());
    t.push_back(ln_exact(f));
  }
  return t[n];
}

double ln_binom(long long p, long long q) {
  if (p < 0 || q < 0 || q > p) throw PreconditionError("ln_binom: C(p,q) = 0");
  return ln_factorial(p) - ln_factorial(q) - ln_factorial(p - q);
}

bool check_identity_basic1(long long p, long long q, long long r) {
  return exact_binom(p, r) * exact_binom(p - r, q - r) ==
         exact_binom(p, q) * exact_binom(q, r);
}

bool check_identity_vandermonde(long long p, long long q, long long r) {
  mpz_class sum = 0;
  for (long long j = 0; j <= p - r; ++j)
    sum += exact_binom(p - r, j) * exact_binom(r, q - j);
  return sum == exact_binom(p, q);
}

double s_function(double x, double tol) {
  if (!(x > 0.0 && x < 1.0)) throw PreconditionError("s_function: x not in (0,1)");
  if (!(tol > 0.0)) throw PreconditionError("s_function: tol <= 0");
  double sum = 0.0, pw = 1.0;
  for (long long j = 1;; ++j) {
    pw *= x;
    sum += pw / (static_cast<double>(j) * (j + 1));
    // tail <= x^{j+1} / ((j+1)(j+2)(1-x))
    if (pw * x / ((j + 1.0) * (j + 2.0) * (1.0 - x)) < tol) break;
  }
  return sum;
}

ApproxReport approx_ln_binom(long long p, long long q) {
  if (!(q >= 1 && q < p)) throw PreconditionError("approx_ln_binom: need 1 <= q < p");
  double pd = static_cast<double>(p), qd = static_cast<double>(q);
  double s = s_function(qd / pd);
  double value = qd * (std::log(pd / qd) + 1.0 - s) +
                 0.5 * std::log(pd / (2.0 * std::numbers::pi * qd * (pd - qd)));
  double exact = ln_binom(p, q);
  long long mn = std::min(q, p - q);
  return {value, exact, std::fabs(value - exact),
          calib_constants().lemma22_K / static_cast<double>(mn)};
}

bool check_lemma_basic2(long long n, long long m, long long l) {
  if (!(m >= 0 && l >= 0 && l + m < n)) throw PreconditionError("basic2: need l+m < n");
  double gap = ln_binom(n - m, l) - ln_binom(n, l);
  double lo = l * std::log1p(-static_cast<double>(m) / (n - l));
  double hi = -static_cast<double>(l) * m / n;
  const double slack = 1e-12;
  return lo <= gap + slack && gap <= hi + slack;
}

double basic3_residual(long long l, long long m, long long j) {
  if (!(m >= 1 && m * m <= l && j >= 1 && j <= m))
    throw PreconditionError("basic3: need m^2 <= l, 1 <= j <= m");
  double lhs = ln_binom(l - m, m - j) + ln_binom(m, j);
  double jd = static_cast<double>(j);
  double rhs0 = ln_binom(l, m) - jd * std::log(jd * l / (static_cast<double>(m) * m)) +
                jd + std::log(jd);
  return lhs - rhs0;  // admissible iff <= K
}

bool check_lemma_basic3(long long l, long long m, long long j, double K) {
  return basic3_residual(l, m, j) <= K + 1e-12;
}

long long round_half_even(long long num, long long den) {
  if (den <= 0 || num < 0) throw PreconditionError("round_half_even: bad input");
  long long q = num / den, r = num % den;
  if (2 * r > den) return q + 1;
  if (2 * r == den) return (q % 2 == 0) ? q : q + 1;
  return q;
}

double proportional_residual(long long p, long long q, long long r) {
  if (!(p >= 1 && q >= 1 && r >= 0 && r <= p + q))
    throw PreconditionError("proportional: need 0 <= r <= p+q");
  long long rp = round_half_even(r * p, p + q);
  long long rq = round_half_even(r * q, p + q);
  if (rp > p) rp = p;
  if (rq > q) rq = q;
  return std::fabs(ln_binom(p + q, r) - ln_binom(p, rp) - ln_binom(q, rq));
}

bool check_proportional(long long p, long long q, long long r, double K) {
  return proportional_residual(p, q, r) <= K * std::log(static_cast<double>(p + q)) + 1e-12;
}

const CalibConstants kCalibDefaults = {
    0.12500008779170457,    // sup over 2<=q<p<=2000 of |approx-exact|*min(q,p-q)
    -0.99999999999981259,   // sup of basic3 residual, m^2<=l<=400
    1.0000000000000353,     // sup of proportional residual / ln(p+q), p,q<=200
};

namespace {
CalibConstants g_calib = kCalibDefaults;
}

const CalibConstants& calib_constants() { return g_calib; }
void set_calib_constants(const CalibConstants& c) { g_calib = c; }

CalibConstants calibrate(long long max_p, long long max_l, long long max_pq) {
  const double neg = std::numeric_limits<double>::lowest();
  CalibConstants out{neg, neg, neg};
  for (long long p = 3; p <= max_p; ++p)
    for (long long q = 2; q < p; ++q) {
      ApproxReport rep = approx_ln_binom(p, q);
      double scaled = rep.abs_error * static_cast<double>(std::min(q, p - q));
      if (scaled > out.lemma22_K) out.lemma22_K = scaled;
    }
  for (long long m = 1; m * m <= max_l; ++m)
    for (long long l = m * m; l <= max_l; ++l)
      for (long long j = 1; j <= m; ++j) {
        double res = basic3_residual(l, m, j);
        if (res > out.lemma25_K) out.lemma25_K = res;
      }
  for (long long p = 1; p <= max_pq; ++p)
    for (long long q = 1; q <= max_pq; ++q)
      for (long long r = 0; r <= p + q; ++r) {
        double res = proportional_residual(p, q, r) /
                     std::log(static_cast<double>(p + q));
        if (res > out.proportional_K) out.proportional_K = res;
      }
  return out;
}

}  // namespace hf
