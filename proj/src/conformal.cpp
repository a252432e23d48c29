#include <htva/conformal.hpp>
#include <htva/parallel.hpp>

#include <mutex>
#include <sstream>

namespace htva {

namespace {

FockState pair_state(Kind a, int sa, int da, Kind b, int sb, int db) {
  Monomial single_a, single_b, out;
  single_a.f = {{make_key(a, sa, da), 1}};
  single_b.f = {{make_key(b, sb, db), 1}};
  int sign = monomial_product(single_a, single_b, &out);
  return FockState::of(out, HPoly(Rational(sign)));
}

RatMat gram_inverse(const BRSTContext& ctx) {
  auto inv = inverse(to_rational(ctx.vctx.gram));
  if (!inv) throw DomainError("Gram form is singular; no conformal vector");
  return *inv;
}

}  // namespace

FockState omega_heisenberg(const BRSTContext& ctx) {
  RatMat ginv = gram_inverse(ctx);
  FockState w;
  for (int i = 0; i < ctx.input.M; ++i)
    for (int j = 0; j < ctx.input.M; ++j)
      if (ginv[i][j] != 0) w += HPoly(ginv[i][j] / 2) * pair_state(Kind::C, i, 1, Kind::C, j, 1);
  return w;
}

FockState omega_betagamma(const BRSTContext& ctx, const Rational& kappa, int j) {
  if (j < 0 || j >= ctx.input.N) throw InputError("site index out of range");
  return HPoly(kappa) * pair_state(Kind::X, j, 2, Kind::Y, j, 1) +
         HPoly(kappa - 1) * pair_state(Kind::X, j, 1, Kind::Y, j, 2);
}

FockState omega_fermion(const BRSTContext& ctx) {
  FockState w;
  for (int i = 0; i < ctx.input.M; ++i) w += pair_state(Kind::PsiStar, i, 2, Kind::Psi, i, 1);
  return w;
}

ConformalVector build_omega(const BRSTContext& ctx, const RatVec& lambda) {
  if (static_cast<int>(lambda.size()) != ctx.input.N) throw InputError("shift vector has wrong length");
  for (int i = 0; i < ctx.input.M; ++i) {
    Rational dot = 0;
    for (int k = 0; k < ctx.input.N; ++k) dot += lambda[k] * ctx.input.delta[i][k];
    if (dot != 0) throw InputError("shift vector is not orthogonal to row " + std::to_string(i + 1));
  }
  ConformalVector cv;
  cv.lambda = lambda;
  cv.state = omega_heisenberg(ctx);
  HPoly h = HPoly::monomial(Rational(1), 1);
  for (int k = 0; k < ctx.input.N; ++k) cv.state += h * omega_betagamma(ctx, ratio(1, 2) + lambda[k], k);
  cv.state += h * omega_fermion(ctx);
  if (!differential(ctx, cv.state).is_zero()) throw DomainError("conformal vector is not closed");
  cv.central_charge = Rational(-(ctx.input.M + ctx.input.N));
  return cv;
}

bool VirasoroReport::ok(const Rational& expected_quartic) const {
  return quartic_scalar && quartic == expected_quartic && cubic_zero && quadratic_matches && linear_matches &&
         no_higher_poles;
}

VirasoroReport virasoro_check(const VertexContext& vctx, const FockState& omega) {
  VirasoroReport r;
  std::map<long, FockState> poles;  // keyed by pole order
  for (auto& [n, s] : ope(vctx, omega, omega)) poles[n] = s;
  auto at = [&](long n) { return poles.count(n) ? poles[n] : FockState(); };

  FockState q = at(4);
  Monomial one;
  if (q.is_zero()) {
    r.quartic_scalar = true;
  } else if (q.terms.size() == 1 && q.terms.begin()->first == one) {
    const HPoly& c = q.terms.begin()->second;
    if (c.degree() == 4 && c.low_degree() == 4) {
      r.quartic_scalar = true;
      r.quartic = c[4];
    }
  }
  if (!r.quartic_scalar) r.mismatches.push_back("pole 4: " + q.str());
  r.cubic_zero = at(3).is_zero();
  if (!r.cubic_zero) r.mismatches.push_back("pole 3: " + at(3).str());
  HPoly h2 = HPoly::monomial(Rational(1), 2);
  r.quadratic_matches = at(2) == HPoly(2) * h2 * omega;
  if (!r.quadratic_matches) r.mismatches.push_back("pole 2: " + at(2).str());
  r.linear_matches = at(1) == h2 * translation(omega);
  if (!r.linear_matches) r.mismatches.push_back("pole 1: " + at(1).str());
  r.no_higher_poles = true;
  for (auto& [n, s] : poles)
    if (n > 4 && !s.is_zero()) {
      r.no_higher_poles = false;
      r.mismatches.push_back("pole " + std::to_string(n) + ": " + s.str());
    }
  r.central_charge = 2 * r.quartic;
  return r;
}

std::vector<Monomial> spanning_monomials(const BRSTContext& ctx, int max_w2) {
  std::vector<Monomial> out;
  for (int w2 = 0; w2 <= max_w2; ++w2)
    for (int g = -ctx.input.M; g <= ctx.input.M; ++g)
      for (auto& m : enumerate_monomials(ctx, w2, g)) out.push_back(m);
  return out;
}

namespace {

struct LemmaCase {
  Generator g;
  int omega_site;  // beta-gamma: j, otherwise unused
};

std::string generator_name(Generator g) {
  return std::string(kind_name(g.kind)) + std::to_string(g.site + 1);
}

}  // namespace

LemmaReport commutator_lemma_check(const BRSTContext& ctx, LemmaKind kind, long m_lo, long m_hi, long n_lo, long n_hi,
                                   const Rational& kappa, int max_w2) {
  LemmaReport rep;
  rep.kind = kind;
  std::vector<LemmaCase> cases;
  std::vector<FockState> omegas;
  const auto& in = ctx.input;
  switch (kind) {
    case LemmaKind::Heis:
      omegas.push_back(omega_heisenberg(ctx));
      for (int i = 0; i < in.M; ++i) cases.push_back({{Kind::C, i}, 0});
      break;
    case LemmaKind::BetaGamma:
      for (int j = 0; j < in.N; ++j) {
        omegas.push_back(omega_betagamma(ctx, kappa, j));
        for (int k = 0; k < in.N; ++k) {
          cases.push_back({{Kind::X, k}, j});
          cases.push_back({{Kind::Y, k}, j});
        }
      }
      break;
    case LemmaKind::Clifford:
      omegas.push_back(omega_fermion(ctx));
      for (int i = 0; i < in.M; ++i) {
        cases.push_back({{Kind::PsiStar, i}, 0});
        cases.push_back({{Kind::Psi, i}, 0});
      }
      break;
  }
  auto states = spanning_monomials(ctx, max_w2);
  std::mutex mu;

  struct Task {
    long m, n;
    LemmaCase c;
  };
  std::vector<Task> tasks;
  for (long m = m_lo; m <= m_hi; ++m)
    for (long n = n_lo; n <= n_hi; ++n)
      for (const auto& c : cases) tasks.push_back({m, n, c});

  parallel_for(tasks.size(), [&](size_t t) {
    const Task& task = tasks[t];
    long m = task.m, n = task.n;
    const LemmaCase& c = task.c;
    const FockState& omega = omegas[kind == LemmaKind::BetaGamma ? c.omega_site : 0];
    // right-hand side as a coefficient times a mode of the same kind
    HPoly coeff;
    Generator target = c.g;
    switch (kind) {
      case LemmaKind::Heis:
        coeff = HPoly::monomial(Rational(-n), 2);
        break;
      case LemmaKind::BetaGamma:
        target.site = c.omega_site;
        if (c.g.site != c.omega_site)
          coeff = HPoly();
        else if (c.g.kind == Kind::X)
          coeff = HPoly::monomial(-(Rational(n) + kappa), 1);
        else
          coeff = HPoly::monomial(-(Rational(n) - kappa + 1), 1);
        break;
      case LemmaKind::Clifford:
        coeff = HPoly::monomial(Rational(n), 1);
        break;
    }
    long checks = 0, failures = 0;
    std::vector<LemmaMismatch> local;
    for (const auto& mono : states) {
      FockState s = FockState::of(mono);
      FockState lhs = field_mode(ctx.vctx, omega, m + 1, apply_mode(ctx.vctx, c.g, n, s)) -
                      apply_mode(ctx.vctx, c.g, n, field_mode(ctx.vctx, omega, m + 1, s));
      FockState rhs = coeff * apply_mode(ctx.vctx, target, m + n, s);
      ++checks;
      if (lhs != rhs) {
        ++failures;
        if (local.size() < 2)
          local.push_back({m, n, generator_name(c.g), s.str(), lhs.str(), rhs.str()});
      }
    }
    std::lock_guard<std::mutex> lock(mu);
    rep.checks += checks;
    rep.failures += failures;
    for (auto& x : local)
      if (rep.mismatches.size() < 8) rep.mismatches.push_back(x);
  });
  std::sort(rep.mismatches.begin(), rep.mismatches.end(), [](const LemmaMismatch& a, const LemmaMismatch& b) {
    return std::tie(a.m, a.n, a.generator, a.state) < std::tie(b.m, b.n, b.generator, b.state);
  });
  return rep;
}

std::optional<RadicalReport> radical_center_check(const BRSTContext& ctx, int max_w2) {
  IntMat ker = integer_kernel(ctx.vctx.gram);
  if (ker.empty()) return std::nullopt;
  RadicalReport r;
  for (int i = 0; i < ctx.input.M; ++i)
    if (ker[0][i] != 0) r.zeta += HPoly(Rational(ker[0][i])) * FockState::mode(Kind::C, i, 1);
  r.annihilates = true;
  for (const auto& mono : spanning_monomials(ctx, max_w2)) {
    FockState s = FockState::of(mono);
    long top = max_product_index(ctx.vctx, r.zeta, s);
    for (long n = 0; n <= top; ++n)
      if (!nth_product(ctx.vctx, r.zeta, s, n).is_zero()) r.annihilates = false;
  }
  r.closed = differential(ctx, r.zeta).is_zero();
  return r;
}

}  // namespace htva
