#include "minflow/numbers.hpp"

#include <map>
#include <stdexcept>

namespace minflow {

namespace {

void validate_quotients(const IntVector& quotients, std::size_t first_checked, const char* what) {
  for (std::size_t i = first_checked; i < quotients.size(); ++i)
    if (quotients[i] < 1)
      throw std::invalid_argument(std::string(what) + ": partial quotients after the first must be >= 1");
}

// Convergent numerators/denominators of a quotient sequence.
struct Convergents {
  Integer p_prev = 1, p = 0;  // p_{-1}, p_{-2} seeded so the first step works
  Integer q_prev = 0, q = 1;
  void push(const Integer& a) {
    Integer p_next = a * p_prev + p;
    Integer q_next = a * q_prev + q;
    p = p_prev;
    q = q_prev;
    p_prev = p_next;
    q_prev = q_next;
  }
  Rational value() const {
    Rational r(p_prev, q_prev);
    r.canonicalize();
    return r;
  }
};

Integer squarefree_part(Integer x, Integer& square_root_factor) {
  square_root_factor = 1;
  if (x <= 0) throw std::domain_error("squarefree part of non-positive integer");
  Integer limit = iroot_floor(x, 3) + 1;
  for (Integer p = 2; p <= limit && p * p <= x; ++p) {
    while (x % (p * p) == 0) {
      x /= p * p;
      square_root_factor *= p;
    }
  }
  if (mpz_perfect_square_p(x.get_mpz_t())) {
    Integer r;
    mpz_sqrt(r.get_mpz_t(), x.get_mpz_t());
    square_root_factor *= r;
    x = 1;
  }
  return x;
}

}  // namespace

RealSpec::RealSpec(RationalValue v) : v_(std::move(v)) {
  finite_cf_ = rational_cf(std::get<RationalValue>(v_).value);
}

RealSpec::RealSpec(PeriodicCF v) : v_(std::move(v)) {
  auto& cf = std::get<PeriodicCF>(v_);
  if (cf.period.empty()) throw std::invalid_argument("periodic continued fraction needs a non-empty period");
  validate_quotients(cf.preperiod, 1, "continued fraction");
  validate_quotients(cf.period, cf.preperiod.empty() ? 0 : 0, "continued fraction period");
}

RealSpec::RealSpec(LiouvilleSeries v) : v_(v) {
  if (v.base < 2) throw std::invalid_argument("Liouville base must be >= 2");
}

Integer RealSpec::partial_quotient(std::size_t k) const {
  if (const auto* cf = std::get_if<PeriodicCF>(&v_)) {
    if (k < cf->preperiod.size()) return cf->preperiod[k];
    return cf->period[(k - cf->preperiod.size()) % cf->period.size()];
  }
  if (is_rational()) {
    if (k >= finite_cf_.size()) throw std::out_of_range("continued fraction index past the end of a rational");
    return finite_cf_[k];
  }
  throw std::invalid_argument("Liouville series has no continued-fraction representation here");
}

std::optional<std::size_t> RealSpec::cf_length() const {
  if (is_rational()) return finite_cf_.size();
  return std::nullopt;
}

IntVector rational_cf(const Rational& value) {
  IntVector out;
  Integer num = value.get_num(), den = value.get_den();
  while (den != 0) {
    Integer a;
    mpz_fdiv_q(a.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());
    out.push_back(a);
    Integer r = num - a * den;
    num = den;
    den = r;
  }
  return out;
}

Rational cf_convergent(const RealSpec& spec, std::size_t k) {
  if (auto len = spec.cf_length(); len && k >= *len)
    throw std::out_of_range("convergent index " + std::to_string(k) + " past the end of a finite expansion");
  Convergents c;
  for (std::size_t i = 0; i <= k; ++i) c.push(spec.partial_quotient(i));
  return c.value();
}

Approximation approximate(const RealSpec& spec, const Rational& eps) {
  if (eps <= 0) throw std::invalid_argument("approximation tolerance must be positive");
  return std::visit(
      [&](const auto& v) -> Approximation {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, RationalValue>) {
          return {v.value, Rational(0)};
        } else if constexpr (std::is_same_v<T, PeriodicCF>) {
          // |theta - p_k/q_k| = 1/(q_k (alpha q_k + q_{k-1})) with alpha the
          // complete quotient at k+1; [a_{k+1}; a_{k+2}, a_{k+3}] bounds it below.
          Convergents c;
          for (std::size_t k = 0;; ++k) {
            c.push(spec.partial_quotient(k));
            Rational alpha_low =
                Rational(spec.partial_quotient(k + 1)) +
                1 / (Rational(spec.partial_quotient(k + 2)) + Rational(1) / Rational(spec.partial_quotient(k + 3)));
            Rational bound = 1 / (Rational(c.q_prev) * (alpha_low * Rational(c.q_prev) + Rational(c.q)));
            if (bound <= eps) return {c.value(), bound};
          }
        } else {
          // Stop at the first K with 2 * base^(-K!) <= eps; the tail is below that.
          Integer base = static_cast<unsigned long>(v.base);
          Rational sum = 0;
          unsigned long factorial = 1;
          for (unsigned long k = 1;; ++k) {
            factorial *= k;
            Rational term(1, pow(base, factorial));
            if (2 * term <= eps) return {sum, 2 * term};
            sum += term;
            if (k > 12) throw std::overflow_error("Liouville approximation beyond supported depth");
          }
        }
      },
      spec.variant());
}

namespace {

IntVector parse_int_list(std::string_view s) {
  IntVector out;
  std::size_t pos = 0;
  while (pos <= s.size()) {
    std::size_t comma = s.find(',', pos);
    std::string_view item = s.substr(pos, comma == std::string_view::npos ? std::string_view::npos : comma - pos);
    Rational r = parse_rational(item);
    if (r.get_den() != 1) throw std::invalid_argument("partial quotients must be integers");
    out.push_back(r.get_num());
    if (comma == std::string_view::npos) break;
    pos = comma + 1;
  }
  return out;
}

RealSpec parse_cf(std::string_view body) {
  if (body.size() < 2 || body.front() != '[' || body.back() != ']')
    throw std::invalid_argument("cf spec must look like cf:[a0;a1,...(p1,...)]");
  body = body.substr(1, body.size() - 2);
  IntVector pre, period;
  std::string_view head = body, tail;
  if (auto semi = body.find(';'); semi != std::string_view::npos) {
    head = body.substr(0, semi);
    tail = body.substr(semi + 1);
  }
  pre = parse_int_list(head);
  if (pre.size() != 1) throw std::invalid_argument("cf spec needs exactly one leading quotient before ';'");
  if (!tail.empty()) {
    std::string_view finite = tail;
    if (auto open = tail.find('('); open != std::string_view::npos) {
      if (tail.back() != ')') throw std::invalid_argument("period must close the cf spec");
      period = parse_int_list(tail.substr(open + 1, tail.size() - open - 2));
      finite = tail.substr(0, open);
      if (!finite.empty() && finite.back() == ',') finite.remove_suffix(1);
    }
    if (!finite.empty()) {
      IntVector more = parse_int_list(finite);
      pre.insert(pre.end(), more.begin(), more.end());
    }
  }
  validate_quotients(pre, 1, "continued fraction");
  if (period.empty()) {
    // finite expansion: evaluate
    Rational value = Rational(pre.back());
    for (std::size_t i = pre.size() - 1; i-- > 0;) value = Rational(pre[i]) + 1 / value;
    return RealSpec(RationalValue{value});
  }
  return RealSpec(PeriodicCF{pre, period});
}

std::string join(const IntVector& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) out += (i ? "," : "") + v[i].get_str();
  return out;
}

}  // namespace

RealSpec parse_real_spec(std::string_view text) {
  if (text.starts_with("rat:")) return RealSpec(RationalValue{parse_rational(text.substr(4))});
  if (text.starts_with("cf:")) return parse_cf(text.substr(3));
  if (text.starts_with("liouville:")) {
    Rational b = parse_rational(text.substr(10));
    if (b.get_den() != 1 || b < 2) throw std::invalid_argument("Liouville base must be an integer >= 2");
    return RealSpec(LiouvilleSeries{b.get_num().get_ui()});
  }
  return RealSpec(RationalValue{parse_rational(text), true});
}

std::string to_string(const RealSpec& spec) {
  return std::visit(
      [](const auto& v) -> std::string {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, RationalValue>) {
          return "rat:" + to_string(v.value);
        } else if constexpr (std::is_same_v<T, PeriodicCF>) {
          std::string out = "cf:[" + v.preperiod.front().get_str() + ";";
          IntVector rest(v.preperiod.begin() + 1, v.preperiod.end());
          if (!rest.empty()) out += join(rest) + ",";
          return out + "(" + join(v.period) + ")]";
        } else {
          return "liouville:" + std::to_string(v.base);
        }
      },
      spec.variant());
}

std::optional<QuadraticForm> quadratic_form(const RealSpec& spec) {
  if (const auto* r = std::get_if<RationalValue>(&spec.variant())) return QuadraticForm{r->value, 0, 1};
  const auto* cf = std::get_if<PeriodicCF>(&spec.variant());
  if (!cf) return std::nullopt;

  // Purely periodic tail y = [c0; c1, ..., c_{k-1}, y].
  Convergents tail;
  for (const auto& c : cf->period) tail.push(c);
  Integer A = tail.q_prev, B = tail.q - tail.p_prev, C = tail.p;
  Integer disc = B * B + 4 * A * C;
  Integer f;
  Integer s = squarefree_part(disc, f);
  // y = -B/(2A) + f/(2A) sqrt(s)
  Rational ya(-B, 2 * A), yb(f, 2 * A);
  ya.canonicalize();
  yb.canonicalize();
  if (s == 1) throw std::logic_error("periodic continued fraction evaluated to a rational");

  // theta = (P y + P') / (Q y + Q') over the preperiod.
  Convergents head;
  for (const auto& a : cf->preperiod) head.push(a);
  Rational X = Rational(head.p_prev) * ya + Rational(head.p), Y = Rational(head.p_prev) * yb;
  Rational Z = Rational(head.q_prev) * ya + Rational(head.q), W = Rational(head.q_prev) * yb;
  Rational den = Z * Z - W * W * Rational(s);
  QuadraticForm out{(X * Z - Y * W * Rational(s)) / den, (Y * Z - X * W) / den, s};
  out.a.canonicalize();
  out.b.canonicalize();
  return out;
}

std::optional<int> rational_span_dimension(const std::vector<RealSpec>& thetas) {
  std::map<Integer, std::size_t> radicals;  // squarefree s -> column
  std::vector<QuadraticForm> forms;
  for (const auto& t : thetas) {
    auto q = quadratic_form(t);
    if (!q) return std::nullopt;
    if (q->b != 0 && !radicals.count(q->s)) radicals.emplace(q->s, radicals.size() + 1);
    forms.push_back(*q);
  }
  std::size_t cols = radicals.size() + 1;
  std::vector<RatVector> rows;
  rows.push_back(RatVector(cols, Rational(0)));
  rows.back()[0] = 1;
  for (const auto& q : forms) {
    RatVector row(cols, Rational(0));
    row[0] = q.a;
    if (q.b != 0) row[radicals.at(q.s)] = q.b;
    rows.push_back(row);
  }
  // rank by elimination
  int rank = 0;
  for (std::size_t col = 0; col < cols && rank < static_cast<int>(rows.size()); ++col) {
    std::size_t pivot = rank;
    while (pivot < rows.size() && rows[pivot][col] == 0) ++pivot;
    if (pivot == rows.size()) continue;
    std::swap(rows[pivot], rows[rank]);
    for (std::size_t r = 0; r < rows.size(); ++r) {
      if (r == static_cast<std::size_t>(rank) || rows[r][col] == 0) continue;
      Rational factor = rows[r][col] / rows[rank][col];
      for (std::size_t c = col; c < cols; ++c) rows[r][c] -= factor * rows[rank][c];
    }
    ++rank;
  }
  return rank;
}

}  // namespace minflow
