#include "psp/counterexample.hpp"

#include <functional>
#include <stdexcept>

#include "psp/errors.hpp"
#include "psp/geometry.hpp"

namespace psp {
namespace {

constexpr std::uint32_t kA = 0, kB = 1, kC = 2, kD = 3;

void require_s(const Rational& s) {
  if (s <= 1) throw std::domain_error("s must exceed 1, got " + to_string(s));
}

const PreferenceOrder& order_of(std::initializer_list<std::uint32_t> ranking) {
  static const auto orders = all_preference_orders(4);
  return orders[order_index(PreferenceOrder::of(ranking))];
}

}  // namespace

PhiParams::PhiParams(Rational s_, Rational alpha_) : s(std::move(s_)), alpha(std::move(alpha_)) {
  require_s(s);
}

Rational PhiParams::gamma_c() const { return (1 - alpha) / ((s - 1) * (s * (s + 1) - 1)); }

Rational PhiParams::gamma_d() const { return s * (s + 1) * (1 - alpha) / (s * (s + 1) - 1); }

std::string RationalInterval::to_string() const {
  return "[" + psp::to_string(lower) + ", " + psp::to_string(upper) + "]";
}

std::vector<AssignmentVector> phi_rows(const PhiParams& p) {
  const Rational alpha = p.alpha, beta = p.beta(), gc = p.gamma_c(), gd = p.gamma_d();
  const Rational zero(0), one(1);
  std::vector<AssignmentVector> rows;
  for (const auto& order : all_preference_orders(4)) {
    const auto first = order[0].index, second = order[1].index, third = order[2].index;
    if (first == kA) {
      rows.push_back({alpha, zero, zero, 1 - alpha});
    } else if (first == kB) {
      rows.push_back({zero, beta, zero, 1 - beta});
    } else if (first == kD) {
      rows.push_back({zero, zero, zero, one});
    } else if (second == kD) {
      rows.push_back({zero, zero, gc, 1 - gc});
    } else if (second == kA && third == kD) {
      rows.push_back({1 - gc - gd, zero, gc, gd});
    } else {
      rows.push_back({1 - gc - gd, gd, gc, zero});
    }
  }
  return rows;
}

RationalInterval feasibility_interval(const Rational& s) {
  require_s(s);
  return {s / (s * s * s - s + 1), 1 / s};
}

TabulatedMechanism build_phi(const PhiParams& p) {
  const auto feasible = feasibility_interval(p.s);
  if (!feasible.contains(p.alpha)) {
    throw ValidationError("alpha = " + to_string(p.alpha) + " is infeasible for s = " +
                          to_string(p.s) + "; feasible alpha lie in " + feasible.to_string());
  }
  const auto rows = phi_rows(p);
  return TabulatedMechanism::tabulate(
      Setting::unit(1, 4), default_object_names(4),
      [&rows](const PreferenceProfile& profile) {
        return AssignmentMatrix{rows[order_index(profile.at(0))]};
      });
}

LocalInterval local_psp_interval(const Rational& s) {
  const auto feasible = feasibility_interval(s);
  const Rational s2 = s * s, s3 = s2 * s, s4 = s3 * s, s5 = s4 * s;
  const Rational inv = 1 / (s - 1);

  LocalInterval out;
  out.bounds = {
      {"feasibility lower", true, feasible.lower},
      {"feasibility upper", false, feasible.upper},
      {"VI lower", true, (s4 - s3) / (s5 + 2 * s4 - s2 - s - 1)},
      {"VI upper", false, (s3 - s + s2 * inv + 1) / (s4 + s3 - s2 + s + s2 * inv)},
      {"VIII upper", false, (s3 - s + 1 - inv) / (s3 + s2 - inv)},
  };
  out.interval = {Rational(0), Rational(1)};
  for (const auto& bound : out.bounds) {
    if (bound.is_lower) {
      out.interval.lower = max(out.interval.lower, bound.value);
    } else {
      out.interval.upper = min(out.interval.upper, bound.value);
    }
  }
  const auto& vi_lower = out.bounds[2].value;
  const auto& vi_upper = out.bounds[3].value;
  out.claim7 = {vi_lower, vi_upper};
  out.claim7_applies = vi_upper <= out.bounds[4].value && vi_upper <= feasible.upper &&
                       vi_lower >= feasible.lower;
  if (out.claim7_applies && !(out.claim7 == out.interval)) {
    throw CrossCheckFailure("local interval " + out.interval.to_string() + " differs from I_s = " +
                            out.claim7.to_string() + " at s = " + to_string(s));
  }
  return out;
}

DerivedInterval derived_local_interval(const Rational& s) {
  const auto feasible = feasibility_interval(s);
  DerivedInterval out{feasible, "feasibility", "feasibility"};
  const auto at0 = phi_rows(PhiParams(s, Rational(0)));
  const auto at1 = phi_rows(PhiParams(s, Rational(1)));
  const auto& orders = all_preference_orders(4);
  const auto names = default_object_names(4);
  for (const auto& truth : orders) {
    for (const auto& mis : neighborhood(truth)) {
      const auto t = order_index(truth), m = order_index(mis);
      Rational d0(0), d1(0);
      for (std::size_t k = 0; k < 3; ++k) {
        const auto j = truth[k].index;
        d0 = d0 * s + (at0[t][j] - at0[m][j]);
        d1 = d1 * s + (at1[t][j] - at1[m][j]);
        // delta_{k+1}(alpha) = d0 + (d1 - d0) alpha
        const Rational slope = d1 - d0;
        const std::string source = format_order(truth, names) + " -> " +
                                   format_order(mis, names) + " delta_" + std::to_string(k + 1);
        if (slope > 0 && -d0 / slope > out.interval.lower) {
          out.interval.lower = -d0 / slope;
          out.lower_source = source;
        } else if (slope < 0 && -d0 / slope < out.interval.upper) {
          out.interval.upper = -d0 / slope;
          out.upper_source = source;
        } else if (slope == 0 && d0 < 0) {
          out.interval = {Rational(1), Rational(0)};
          out.lower_source = out.upper_source = source;
          return out;
        }
      }
    }
  }
  return out;
}

LocalPspReport verify_local_psp(const PhiParams& p) {
  const auto mech = build_phi(p);
  const Rational r = 1 / p.s;
  LocalPspReport report;
  auto check = check_r_psp(mech, r, Scope::kLocal);
  report.local_psp = check.holds;
  report.witness = std::move(check.witness);

  const Rational s = p.s, alpha = p.alpha, beta = p.beta(), gc = p.gamma_c(), gd = p.gamma_d();
  const Rational s2 = s * s, s3 = s2 * s, s4 = s3 * s, s5 = s4 * s;
  const Rational q = s * (s + 1) - 1;  // s(s+1) - 1
  const Rational inv = 1 / (s - 1);
  const auto& rows = phi_rows(p);
  auto row = [&rows](const PreferenceOrder& order) -> const AssignmentVector& {
    return rows[order_index(order)];
  };
  const auto names = default_object_names(4);
  auto label = [&names](const std::string& c, const PreferenceOrder& from,
                        const PreferenceOrder& to) {
    return c + " " + format_order(from, names) + " -> " + format_order(to, names);
  };

  // (case, truth, misreport, {delta_1, delta_2, delta_3} closed forms; empty = not given)
  struct Spec {
    std::string name;
    const PreferenceOrder& truth;
    const PreferenceOrder& misreport;
    std::vector<std::optional<Rational>> closed;
  };
  const Rational iii_delta2 = (1 - alpha) * s * ((s * (s + 1) + 1 / s) / q - 1);
  const Rational zero_form = (1 - alpha) * (1 + (1 - s * (s + 1)) / q);
  const std::vector<Spec> specs = {
      {"I", order_of({kA, kB, kD, kC}), order_of({kB, kA, kD, kC}), {alpha, s * alpha - beta, beta - alpha}},
      {"I", order_of({kB, kA, kD, kC}), order_of({kA, kB, kD, kC}),
       {beta, alpha * (s2 - 1), alpha * (s3 - 2 * s + 1)}},
      {"III", order_of({kA, kC, kD, kB}), order_of({kC, kA, kD, kB}),
       {alpha - 1 + (1 - alpha) * ((inv + s * (s + 1)) / q), iii_delta2, s * iii_delta2}},
      {"III", order_of({kC, kA, kD, kB}), order_of({kA, kC, kD, kB}),
       {gc, zero_form, (1 - alpha) * (s * (s + 1) / q - 1)}},
      {"IV", order_of({kA, kC, kB, kD}), order_of({kC, kA, kB, kD}),
       {alpha - 1 + gc + gd, s * (alpha - 1 + gc + gd) - gc, 1 - alpha}},
      {"IV", order_of({kC, kA, kB, kD}), order_of({kA, kC, kB, kD}), {gc, zero_form, gd}},
      {"VI", order_of({kB, kC, kA, kD}), order_of({kC, kB, kA, kD}),
       {std::nullopt, std::nullopt, alpha * (s5 + 2 * s4 - s2 - s - 1) / q - (s4 - s3) / q}},
      {"VI", order_of({kC, kB, kD, kA}), order_of({kB, kC, kD, kA}),
       {gc, std::nullopt,
        alpha * ((-s4 - s3 + s2 - s - s2 * inv) / q) + (s3 - s + s2 * inv + 1) / q}},
      {"VIII", order_of({kC, kD, kB, kA}), order_of({kC, kB, kD, kA}),
       {gc - gc, 1 - gc, s * (1 - gc) + gd}},
      {"VIII", order_of({kC, kB, kD, kA}), order_of({kC, kD, kB, kA}),
       {gc - gc, gd, alpha * ((-s2 * (s + 1) - inv) / q) + (s2 * (s + 1) - inv - s * (s + 1) + 1) / q}},
      {"IX", order_of({kC, kA, kD, kB}), order_of({kC, kA, kB, kD}), {gc - gc, Rational(0), gd}},
      {"IX", order_of({kC, kA, kB, kD}), order_of({kC, kA, kD, kB}), {gc - gc, Rational(0), gd}},
  };
  for (const auto& spec : specs) {
    const auto delta = delta_partial_sums(spec.truth, row(spec.truth), row(spec.misreport), r);
    for (std::size_t k = 1; k <= 3; ++k) {
      CaseCheck c;
      c.label = label(spec.name, spec.truth, spec.misreport);
      c.quantity = "delta_" + std::to_string(k);
      c.closed_form = spec.closed[k - 1];
      c.machinery = delta.adjusted(k);
      if (c.closed_form) {
        c.sign_agrees = (*c.closed_form >= 0) == (c.machinery >= 0);
        c.exact_agrees = *c.closed_form == c.machinery;
      }
      report.cases.push_back(std::move(c));
    }
  }

  // Pure stochastic-dominance cases, both directions.
  const std::vector<std::tuple<std::string, PreferenceOrder, PreferenceOrder>> sd_cases = {
      {"II", order_of({kA, kD, kB, kC}), order_of({kD, kA, kB, kC})},
      {"V", order_of({kB, kD, kA, kC}), order_of({kD, kB, kA, kC})},
      {"VII", order_of({kD, kC, kA, kB}), order_of({kC, kD, kA, kB})},
  };
  for (const auto& [name, one, other] : sd_cases) {
    for (const auto& [truth, mis] : {std::pair{one, other}, std::pair{other, one}}) {
      CaseCheck c;
      c.label = label(name, truth, mis);
      c.quantity = "SD";
      bool sd = sd_dominates(truth, row(truth), row(mis));
      c.machinery = sd ? 1 : 0;
      c.sign_agrees = sd;
      c.exact_agrees = sd;
      report.cases.push_back(std::move(c));
    }
  }

  for (const auto& c : report.cases) {
    if (!c.sign_agrees) {
      throw CrossCheckFailure("case " + c.label + " " + c.quantity + ": closed form " +
                              (c.closed_form ? to_string(*c.closed_form) : std::string("SD")) +
                              " disagrees with the tabulated rows (" + to_string(c.machinery) +
                              ") at s = " + to_string(p.s) + ", alpha = " + to_string(p.alpha));
    }
  }
  return report;
}

Interval adjusted_delta(const PreferenceOrder& order, const AssignmentVector& x,
                        const AssignmentVector& y, std::size_t k, const Interval& s_tilde) {
  if (k < 1 || k > order.size()) throw std::invalid_argument("adjusted_delta: k out of range");
  Interval acc(Rational(0), s_tilde.precision());
  for (std::size_t l = 0; l < k; ++l) {
    const auto j = order[l].index;
    acc = acc * s_tilde + Interval(x.at(j) - y.at(j), s_tilde.precision());
  }
  return acc;
}

Delta3Evidence::Delta3Evidence(Interval direct_, Interval closed_form_)
    : direct(std::move(direct_)), closed_form(std::move(closed_form_)) {}

Delta3Evidence nonlocal_delta3(const Rational& s, const Rational& alpha, const Rational& epsilon,
                               mpfr_prec_t precision) {
  if (epsilon <= 0 || epsilon >= 2) {
    throw std::domain_error("epsilon must lie in (0, 2), got " + to_string(epsilon));
  }
  const PhiParams p(s, alpha);
  if (!feasibility_interval(s).contains(alpha)) {
    throw std::domain_error("alpha = " + to_string(alpha) + " is infeasible for s = " + to_string(s));
  }
  const auto rows = phi_rows(p);
  const auto& truth = order_of({kA, kB, kC, kD});
  const auto& mis = order_of({kC, kA, kB, kD});
  const auto& x = rows[order_index(truth)];
  const auto& y = rows[order_index(mis)];

  const Rational exponent = 2 - epsilon;
  const Interval s_tilde = Interval::power(s, exponent, precision);
  Interval direct = adjusted_delta(truth, x, y, 3, s_tilde);

  auto P = [&](const Rational& e) { return Interval::power(s, e, precision); };
  auto I = [&](const Rational& v) { return Interval(v, precision); };
  Interval numerator = P(5 - epsilon) * I(-1) + P(5 - 2 * epsilon) + P(3 - epsilon) - I(1);
  Interval closed = I(1 - alpha) * numerator / I(s * s * s - 2 * s + 1);

  if (!direct.overlaps(closed)) {
    throw CrossCheckFailure("non-local delta_3 enclosures are disjoint at s = " + to_string(s) +
                            ", alpha = " + to_string(alpha) + ", epsilon = " + to_string(epsilon));
  }
  Delta3Evidence evidence(direct, closed);
  evidence.precision = precision;
  evidence.sign = direct.intersect(closed).sign();
  if (mpz_cmp_ui(exponent.get_den_mpz_t(), 1) == 0) {
    const Rational st = pow(s, static_cast<unsigned>(exponent.get_num().get_ui()));
    Rational exact(0);
    for (std::size_t l = 0; l < 3; ++l) {
      const auto j = truth[l].index;
      exact = exact * st + (x[j] - y[j]);
    }
    evidence.exact = exact;
    evidence.sign = sgn(exact);
  }
  return evidence;
}

Rational next_witness_s(const Rational& s) {
  Rational grown = s * 5 / 4;
  Integer ceiling;
  mpz_cdiv_q(ceiling.get_mpz_t(), grown.get_num_mpz_t(), grown.get_den_mpz_t());
  return max(s + 1, Rational(ceiling));
}

WitnessCertificate find_witness(const Rational& epsilon, const Rational& s_max) {
  if (epsilon <= 0 || epsilon >= 2) {
    throw std::domain_error("epsilon must lie in (0, 2), got " + to_string(epsilon));
  }
  const auto& truth = order_of({kA, kB, kC, kD});
  const auto& mis = order_of({kC, kA, kB, kD});
  const Rational exponent = 2 - epsilon;
  const bool exact_power = mpz_cmp_ui(exponent.get_den_mpz_t(), 1) == 0;

  std::size_t scanned = 0;
  Rational s(2), last(2);
  for (; s <= s_max; s = next_witness_s(s)) {
    ++scanned;
    last = s;
    const auto local = derived_local_interval(s);
    if (local.interval.empty()) continue;
    const Rational alpha = local.interval.midpoint();

    mpfr_prec_t precision = 128;
    auto evidence = nonlocal_delta3(s, alpha, epsilon, precision);
    while (evidence.sign == 0 && precision < 8192) {
      precision *= 2;
      evidence = nonlocal_delta3(s, alpha, epsilon, precision);
    }
    if (evidence.sign >= 0) continue;

    WitnessCertificate cert;
    cert.epsilon = epsilon;
    cert.s = s;
    cert.alpha = alpha;
    cert.local_interval = local.interval;
    cert.scanned = scanned;
    cert.delta3 = evidence;
    // A rational discount no larger than s^{-(2 - epsilon)}, so the geometric
    // utility built from it lies in URBI(r^{2 - epsilon}).
    if (exact_power) {
      cert.r_tilde = 1 / pow(s, static_cast<unsigned>(exponent.get_num().get_ui()));
    } else {
      cert.r_tilde = 1 / Interval::power(s, exponent, precision).upper();
    }
    cert.violating_utility = geometric_utility(truth, cert.r_tilde);
    const PhiParams params(s, alpha);
    const auto mech = build_phi(params);
    const auto& x = mech.row(mech.profile_index({truth}), 0);
    const auto& y = mech.row(mech.profile_index({mis}), 0);
    cert.gain = expected_utility(cert.violating_utility, y) -
                expected_utility(cert.violating_utility, x);
    if (cert.gain <= 0) continue;

    auto check = check_r_psp(mech, 1 / s, Scope::kLocal);
    cert.local_check = check.holds;
    cert.local_witness = std::move(check.witness);
    const Rational r = 1 / s;
    cert.r_global = max_degree(mech, Scope::kGlobal).degree;
    cert.r_global_bounds = cert.r_global.lower >= r * r && cert.r_global.upper < cert.r_tilde;
    cert.complete = cert.local_check && cert.r_global_bounds;
    return cert;
  }
  throw BudgetExhausted("no witness for epsilon = " + to_string(epsilon) + " with s <= " +
                            to_string(s_max),
                        to_string(last));
}

nlohmann::json WitnessCertificate::to_json() const {
  constexpr int kDigits = 30;
  nlohmann::json out;
  out["epsilon"] = to_string(epsilon);
  out["s"] = to_string(s);
  out["r"] = to_string(1 / s);
  out["alpha"] = to_string(alpha);
  out["local_interval"] = {to_string(local_interval.lower), to_string(local_interval.upper)};
  out["s_values_scanned"] = scanned;
  out["local_check"] = local_check;
  out["local_witness"] =
      local_witness ? local_witness->to_json(default_object_names(4)) : nlohmann::json();
  if (delta3) {
    out["delta3"] = {
        {"truth", "a>b>c>d"},
        {"misreport", "c>a>b>d"},
        {"precision_bits", delta3->precision},
        {"decimal_digits", kDigits},
        {"direct", {delta3->direct.lower_decimal(kDigits), delta3->direct.upper_decimal(kDigits)}},
        {"closed_form",
         {delta3->closed_form.lower_decimal(kDigits), delta3->closed_form.upper_decimal(kDigits)}},
        {"sign", delta3->sign},
        {"exact", delta3->exact ? nlohmann::json(to_string(*delta3->exact)) : nlohmann::json()}};
  }
  out["r_tilde"] = to_string(r_tilde);
  nlohmann::json u = nlohmann::json::object();
  const auto names = default_object_names(4);
  for (std::size_t j = 0; j < violating_utility.size(); ++j) {
    u[names[j]] = to_string(violating_utility.values[j]);
  }
  out["violating_utility"] = u;
  out["gain"] = to_string(gain);
  out["r_global"] = degree_to_json(r_global);
  out["r_global_bounds"] = r_global_bounds;
  out["complete"] = complete;
  return out;
}

}  // namespace psp
