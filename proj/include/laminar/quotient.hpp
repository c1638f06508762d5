#pragma once

#include <algorithm>
#include <limits>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "dynamics.hpp"
#include "groups.hpp"
#include "lamination.hpp"

namespace laminar {

// Points of the circle identified by two laminations: endpoints of a leaf,
// or vertices of an ideal-polygon gap, in either lamination. Gaps that still
// touch the circle along an arc are unfinished regions of a truncated
// lamination and identify nothing.
class QuotientComplex {
 public:
  static constexpr std::size_t npos = std::numeric_limits<std::size_t>::max();

  Model model() const { return model_; }
  const FiniteLamination& first() const { return lam1_; }
  const FiniteLamination& second() const { return lam2_; }
  const std::vector<CirclePoint>& universe() const { return pts_; }
  std::size_t class_count() const { return classes_.size(); }
  // members in increasing order; the first is the representative
  const std::vector<CirclePoint>& members(std::size_t cls) const { return classes_.at(cls); }

  std::size_t class_of(const CirclePoint& p) const {
    auto it = std::lower_bound(pts_.begin(), pts_.end(), p);
    if (it == pts_.end() || *it != p) return npos;
    return cls_[static_cast<std::size_t>(it - pts_.begin())];
  }

  friend QuotientComplex build_quotient(const FiniteLamination&, const FiniteLamination&, std::vector<CirclePoint>);

 private:
  Model model_ = Model::Angle;
  FiniteLamination lam1_, lam2_;
  std::vector<CirclePoint> pts_;
  std::vector<std::size_t> cls_;
  std::vector<std::vector<CirclePoint>> classes_;
};

inline QuotientComplex build_quotient(const FiniteLamination& l1, const FiniteLamination& l2,
                                      std::vector<CirclePoint> samples) {
  if (l1.model() != l2.model()) throw Error(ErrorKind::ModelMismatch, "laminations in different models");
  for (const auto& s : samples)
    if (s.model() != l1.model()) throw Error(ErrorKind::ModelMismatch, "sample " + s.str() + " in the wrong model");
  QuotientComplex Q;
  Q.model_ = l1.model();
  Q.lam1_ = l1;
  Q.lam2_ = l2;
  auto& pts = Q.pts_;
  pts = std::move(samples);
  for (const auto* L : {&l1, &l2}) {
    auto e = L->endpoints();
    pts.insert(pts.end(), e.begin(), e.end());
  }
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());

  std::vector<std::size_t> parent(pts.size());
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  auto idx = [&](const CirclePoint& p) { return static_cast<std::size_t>(std::lower_bound(pts.begin(), pts.end(), p) - pts.begin()); };
  auto unite = [&](const CirclePoint& a, const CirclePoint& b) {
    std::size_t x = find(idx(a)), y = find(idx(b));
    if (x != y) parent[std::max(x, y)] = std::min(x, y);
  };
  for (const auto* L : {&l1, &l2}) {
    for (const auto& l : L->leaves()) unite(l.first(), l.second());
    for (const auto& g : gaps(*L))
      if (g.ideal_polygon())
        for (const auto& v : g.vertices) unite(g.vertices.front(), v);
  }
  // roots are minimal, so classes come out ordered by representative
  Q.cls_.assign(pts.size(), 0);
  std::vector<std::size_t> id(pts.size(), QuotientComplex::npos);
  for (std::size_t i = 0; i < pts.size(); ++i) {
    std::size_t r = find(i);
    if (id[r] == QuotientComplex::npos) {
      id[r] = Q.classes_.size();
      Q.classes_.emplace_back();
    }
    Q.cls_[i] = id[r];
    Q.classes_[id[r]].push_back(pts[i]);
  }
  return Q;
}

// A point of the sphere: a class of the universe, or a lone point outside it.
struct SphereSample {
  std::size_t id = QuotientComplex::npos;  // npos outside the universe
  CirclePoint representative;
  std::vector<CirclePoint> provenance;
  friend bool operator==(const SphereSample& x, const SphereSample& y) { return x.representative == y.representative; }
};

inline SphereSample project(const QuotientComplex& Q, const CirclePoint& p) {
  std::size_t c = Q.class_of(p);
  if (c == QuotientComplex::npos) return {c, p, {p}};
  return {c, Q.members(c).front(), Q.members(c)};
}

struct EquivarianceDefect {
  CirclePoint sample;
  CirclePoint partner;  // same class as sample, image in another class
  SphereSample image_of_sample, image_of_partner;
};

struct EquivarianceReport {
  std::size_t checked = 0;
  std::vector<EquivarianceDefect> defects;
};

// Every member of the class of each sample must land in one class. With a
// truncated construction the domain laminations are the shallower ones,
// whose images the map is exact on; they also define the classes there.
inline EquivarianceReport equivariance_check(const QuotientComplex& Q, const CircleMap& f,
                                             const std::vector<CirclePoint>& samples,
                                             const std::optional<std::pair<FiniteLamination, FiniteLamination>>& domain = {}) {
  const FiniteLamination& d1 = domain ? domain->first : Q.first();
  const FiniteLamination& d2 = domain ? domain->second : Q.second();
  for (const auto& [small, big] : {std::pair{&d1, &Q.first()}, std::pair{&d2, &Q.second()}}) {
    auto bad = check_invariance(*small, *big, f);
    if (!bad.empty()) throw Error(ErrorKind::NotInvariant, "image of leaf " + bad.front().str() + " is not a leaf");
  }
  QuotientComplex D = domain ? build_quotient(d1, d2, samples) : Q;
  ConcreteMap g = f.flatten();
  EquivarianceReport rep;
  for (const auto& p : samples) {
    ++rep.checked;
    SphereSample ip = project(Q, evaluate(g, p));
    std::size_t c = D.class_of(p);
    if (c == QuotientComplex::npos) continue;
    for (const auto& x : D.members(c)) {
      SphereSample ix = project(Q, evaluate(g, x));
      if (!(ix == ip)) {
        rep.defects.push_back({p, x, ip, ix});
        break;
      }
    }
  }
  return rep;
}

// ---- convergence harness ----

// 0, 1/2, 1/3, 2/3, 1/4, 3/4, ... carried to the model through the chart
inline std::vector<CirclePoint> farey_samples(Model m, std::size_t n) {
  std::vector<CirclePoint> out;
  if (n > 0) out.push_back(from_chart(m, QuadraticReal(0L)));
  for (long d = 2; out.size() < n; ++d)
    for (long k = 1; k < d && out.size() < n; ++k)
      if (std::gcd(k, d) == 1) out.push_back(from_chart(m, QuadraticReal(Rational(k, d))));
  return out;
}

enum class ConvergenceVerdict { ConvergenceObserved, Inconclusive, ViolationWitness };

inline const char* to_string(ConvergenceVerdict v) {
  switch (v) {
    case ConvergenceVerdict::ConvergenceObserved: return "ConvergenceObserved";
    case ConvergenceVerdict::Inconclusive: return "Inconclusive";
    case ConvergenceVerdict::ViolationWitness: return "ViolationWitness";
  }
  return "?";
}

struct SequenceReport {
  Word word;                        // the sequence is word^n for n in powers
  std::vector<long> powers;
  std::vector<SphereSample> attractor, repeller;
  std::vector<double> concentration;  // per element: share of eligible samples within delta of a
  ConvergenceVerdict verdict = ConvergenceVerdict::Inconclusive;
  std::vector<CirclePoint> witness;   // three samples with separated limits
  std::string note;
};

struct ConvergenceReport {
  Rational delta;
  std::size_t samples = 0;
  std::vector<SequenceReport> sequences;
  std::size_t observed = 0, inconclusive = 0, violations = 0;
  ConvergenceVerdict verdict = ConvergenceVerdict::Inconclusive;
};

namespace detail {

inline bool near_any(const CirclePoint& x, const std::vector<CirclePoint>& pts, const Rational& delta) {
  for (const auto& p : pts)
    if (within_distance(x, p, delta)) return true;
  return false;
}

// fixed points with their whole classes
inline std::vector<CirclePoint> thicken(const QuotientComplex& Q, const std::vector<CirclePoint>& pts) {
  std::vector<CirclePoint> out;
  for (const auto& p : pts)
    for (const auto& m : project(Q, p).provenance) out.push_back(m);
  return out;
}

}  // namespace detail

// Tail of a sequence of maps sharing the attracting set A and repelling set
// R: every sample farther than delta from R must land within delta of A.
inline void judge_sequence(SequenceReport& rep, const QuotientComplex& Q, const std::vector<ConcreteMap>& seq,
                           const std::vector<CirclePoint>& samples, const std::vector<CirclePoint>& A,
                           const std::vector<CirclePoint>& R, const Rational& delta, const Rational& tail) {
  auto Ath = detail::thicken(Q, A), Rth = detail::thicken(Q, R);
  std::vector<CirclePoint> eligible;
  for (const auto& x : samples)
    if (!detail::near_any(x, Rth, delta)) eligible.push_back(x);
  Rational tn = Rational(static_cast<long>(seq.size())) * tail;
  std::size_t start = seq.size() - Integer(-floor(-tn)).convert_to<std::size_t>();
  bool all = !eligible.empty() && seq.size() >= 3;
  for (std::size_t i = 0; i < seq.size(); ++i) {
    std::size_t hits = 0;
    for (const auto& x : eligible)
      if (detail::near_any(evaluate(seq[i], x), Ath, delta)) ++hits;
    rep.concentration.push_back(eligible.empty() ? 0.0 : static_cast<double>(hits) / static_cast<double>(eligible.size()));
    if (i >= start && hits != eligible.size()) all = false;
  }
  if (all) {
    rep.verdict = ConvergenceVerdict::ConvergenceObserved;
    return;
  }
  if (eligible.size() < 3 || seq.size() < 3) {
    rep.verdict = ConvergenceVerdict::Inconclusive;
    rep.note = "too few samples or elements";
    return;
  }
  // three samples whose images stay pairwise apart over the whole tail
  auto last = seq.back();
  std::vector<std::pair<double, CirclePoint>> img;
  for (const auto& x : eligible) img.push_back({chart_double(evaluate(last, x)), x});
  std::sort(img.begin(), img.end(), [](const auto& u, const auto& v) { return u.first < v.first; });
  // spread around the circle as seen by the last element
  std::vector<CirclePoint> reps;
  for (std::size_t k = 0; k < 3; ++k) reps.push_back(img[k * img.size() / 3].second);
  bool persistent = true;
  for (std::size_t i = start; persistent && i < seq.size(); ++i)
    for (std::size_t u = 0; u < 3 && persistent; ++u)
      for (std::size_t v = u + 1; v < 3; ++v)
        if (within_distance(evaluate(seq[i], reps[u]), evaluate(seq[i], reps[v]), 2 * delta)) persistent = false;
  if (persistent) {
    rep.verdict = ConvergenceVerdict::ViolationWitness;
    rep.witness = reps;
  } else {
    rep.verdict = ConvergenceVerdict::Inconclusive;
    rep.note = "tail not concentrated";
  }
}

// Power sequences w^n of the cyclically reduced words w of length <= maxLen.
inline ConvergenceReport convergence_sample(const GeneratorSet& G, const FiniteLamination& l1, const FiniteLamination& l2,
                                            long maxLen, std::size_t nSamples, const Rational& delta = Rational(1, 100),
                                            int maxPower = kDefaultMaxPower) {
  if (delta <= 0) throw Error(ErrorKind::InvalidArgument, "delta must be positive");
  auto samples = farey_samples(G.model(), nSamples);
  QuotientComplex Q = build_quotient(l1, l2, samples);
  ConvergenceReport out;
  out.delta = delta;
  out.samples = samples.size();
  const Rational tail(1, 3);
  for (const auto& w : enumerate_reduced_words(G.names(), maxLen)) {
    if (w.empty()) continue;
    const auto& ls = w.letters();
    if (ls.size() > 1 && ls.front().gen == ls.back().gen) continue;  // not cyclically reduced
    SequenceReport rep;
    rep.word = w;
    ConcreteMap f = evaluate_word(G, w);
    long N = std::max<long>(3, (3 * maxLen + static_cast<long>(w.length()) - 1) / static_cast<long>(w.length()));
    std::vector<ConcreteMap> seq;
    ConcreteMap acc = f;
    for (long n = 1; n <= N; ++n) {
      if (is_identity(acc)) break;
      bool repeat = false;
      for (const auto& s : seq)
        if (!ConcreteMapLess{}(s, acc) && !ConcreteMapLess{}(acc, s)) repeat = true;
      if (repeat) break;
      seq.push_back(acc);
      rep.powers.push_back(n);
      acc = compose(acc, f);
    }
    std::vector<CirclePoint> A, R;
    if (seq.size() >= 3) {
      try {
        MapClass c = classify(f, maxPower);
        using T = MapClass::Tag;
        if (c.tag == T::Hyperbolic || c.tag == T::ProperlyPALike || c.tag == T::Parabolic || c.tag == T::PALike) {
          for (const auto& d : fixed_points(power(f, c.tag == T::PALike ? c.period : 1))) {
            if (d.kind != FixedKind::Repelling) A.push_back(d.locus);
            if (d.kind != FixedKind::Attracting) R.push_back(d.locus);
          }
        }
      } catch (const Error& e) {
        rep.note = e.what();
      }
    }
    for (const auto& a : A) rep.attractor.push_back(project(Q, a));
    for (const auto& r : R) rep.repeller.push_back(project(Q, r));
    if (seq.size() < 3) {
      rep.verdict = ConvergenceVerdict::Inconclusive;
      if (rep.note.empty()) rep.note = "sequence repeats";
      for (std::size_t i = 0; i < seq.size(); ++i) rep.concentration.push_back(0.0);
    } else {
      // without an attractor only a violation can be reported
      judge_sequence(rep, Q, seq, samples, A, R, delta, tail);
    }
    switch (rep.verdict) {
      case ConvergenceVerdict::ConvergenceObserved: ++out.observed; break;
      case ConvergenceVerdict::Inconclusive: ++out.inconclusive; break;
      case ConvergenceVerdict::ViolationWitness: ++out.violations; break;
    }
    out.sequences.push_back(std::move(rep));
  }
  if (out.violations > 0)
    out.verdict = ConvergenceVerdict::ViolationWitness;
  else if (out.observed > 0 && out.inconclusive == 0)
    out.verdict = ConvergenceVerdict::ConvergenceObserved;
  else
    out.verdict = ConvergenceVerdict::Inconclusive;
  return out;
}

}  // namespace laminar
