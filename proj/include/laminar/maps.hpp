#pragma once

#include <algorithm>
#include <array>
#include <map>
#include <memory>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include "circle.hpp"

namespace laminar {

// Orientation-preserving piecewise-linear homeomorphism of R/Z given by its
// breakpoints. Canonical form: sorted by input, no breakpoint where the slope
// does not change; a rotation keeps the single breakpoint (0, rho).
class PLMap {
 public:
  struct Breakpoint {
    Rational x;
    Rational y;
    friend bool operator==(const Breakpoint&, const Breakpoint&) = default;
  };
  struct Piece {
    Rational x0, dx, y0, dy;
    Rational slope() const { return dy / dx; }
  };

  PLMap() : bps_{{Rational(0), Rational(0)}} {}

  static PLMap identity() { return PLMap(); }
  static PLMap rotation(const Rational& r) { return from_breakpoints({{Rational(0), frac(r)}}); }

  static PLMap from_breakpoints(std::vector<Breakpoint> bps) {
    if (bps.empty()) throw Error(ErrorKind::InvalidArgument, "PL map needs at least one breakpoint");
    for (auto& b : bps) {
      b.x = frac(b.x);
      b.y = frac(b.y);
    }
    std::sort(bps.begin(), bps.end(), [](const Breakpoint& u, const Breakpoint& v) { return u.x < v.x; });
    for (std::size_t i = 0; i + 1 < bps.size(); ++i)
      if (bps[i].x == bps[i + 1].x) {
        if (bps[i].y != bps[i + 1].y)
          throw Error(ErrorKind::InvalidArgument, "PL map has two outputs at " + bps[i].x.str());
      }
    bps.erase(std::unique(bps.begin(), bps.end()), bps.end());
    if (bps.size() > 1) {
      Rational total = 0;
      for (std::size_t i = 0; i < bps.size(); ++i) {
        Rational dy = frac(bps[(i + 1) % bps.size()].y - bps[i].y);
        if (dy == 0) throw Error(ErrorKind::InvalidArgument, "PL map is not injective");
        total += dy;
      }
      if (total != 1) throw Error(ErrorKind::InvalidArgument, "PL map outputs are not in cyclic order");
    }
    PLMap f;
    f.bps_ = std::move(bps);
    f.canonicalize();
    return f;
  }

  const std::vector<Breakpoint>& breakpoints() const { return bps_; }
  std::size_t size() const { return bps_.size(); }

  Piece piece(std::size_t i) const {
    std::size_t n = bps_.size();
    const auto& u = bps_[i];
    const auto& v = bps_[(i + 1) % n];
    if (n == 1) return {u.x, Rational(1), u.y, Rational(1)};
    return {u.x, frac(v.x - u.x), u.y, frac(v.y - u.y)};
  }

  // index of the piece whose half-open domain [x_i, x_{i+1}) contains t
  std::size_t piece_index(const Rational& t) const {
    auto it = std::upper_bound(bps_.begin(), bps_.end(), t,
                               [](const Rational& v, const Breakpoint& b) { return v < b.x; });
    if (it == bps_.begin()) return bps_.size() - 1;
    return static_cast<std::size_t>(it - bps_.begin()) - 1;
  }

  Rational apply(const Rational& t0) const {
    Rational t = frac(t0);
    Piece p = piece(piece_index(t));
    return frac(p.y0 + p.dy * frac(t - p.x0) / p.dx);
  }

  PLMap inverse() const {
    std::vector<Breakpoint> v;
    v.reserve(bps_.size());
    for (const auto& b : bps_) v.push_back({b.y, b.x});
    return from_breakpoints(std::move(v));
  }

  bool is_identity() const { return bps_.size() == 1 && bps_[0].x == 0 && bps_[0].y == 0; }

  friend bool operator==(const PLMap&, const PLMap&) = default;
  friend bool operator<(const PLMap& f, const PLMap& g) {
    return std::lexicographical_compare(
        f.bps_.begin(), f.bps_.end(), g.bps_.begin(), g.bps_.end(),
        [](const Breakpoint& u, const Breakpoint& v) { return u.x != v.x ? u.x < v.x : u.y < v.y; });
  }

 private:
  void canonicalize() {
    std::size_t n = bps_.size();
    if (n == 1) {
      bps_ = {{Rational(0), apply_single(Rational(0))}};
      return;
    }
    std::vector<Rational> slopes(n);
    for (std::size_t i = 0; i < n; ++i) slopes[i] = piece(i).slope();
    std::vector<Breakpoint> kept;
    for (std::size_t i = 0; i < n; ++i)
      if (slopes[(i + n - 1) % n] != slopes[i]) kept.push_back(bps_[i]);
    if (kept.empty()) {  // a rotation written with redundant breakpoints
      Rational rho = frac(bps_[0].y - bps_[0].x);
      bps_ = {{Rational(0), rho}};
      return;
    }
    bps_ = std::move(kept);
  }
  Rational apply_single(const Rational& t) const { return frac(bps_[0].y + t - bps_[0].x); }

  std::vector<Breakpoint> bps_;
};

inline PLMap compose(const PLMap& f, const PLMap& g) {
  PLMap ginv = g.inverse();
  std::vector<Rational> xs;
  for (const auto& b : g.breakpoints()) xs.push_back(b.x);
  for (const auto& b : f.breakpoints()) xs.push_back(ginv.apply(b.x));
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
  std::vector<PLMap::Breakpoint> v;
  v.reserve(xs.size());
  for (const auto& x : xs) v.push_back({x, f.apply(g.apply(x))});
  return PLMap::from_breakpoints(std::move(v));
}

// x -> (p x + q) / (r x + s) with ps - qr > 0, stored primitive with the
// first nonzero entry positive.
class MobiusMap {
 public:
  MobiusMap() : e_{Integer(1), Integer(0), Integer(0), Integer(1)} {}

  static MobiusMap make(const Rational& p, const Rational& q, const Rational& r, const Rational& s) {
    std::array<Rational, 4> in{p, q, r, s};
    Integer l = 1;
    for (auto& x : in) l = boost::multiprecision::lcm(l, Integer(boost::multiprecision::denominator(x)));
    std::array<Integer, 4> e;
    for (int i = 0; i < 4; ++i) e[i] = Integer(in[i] * Rational(l));
    return from_integers(e[0], e[1], e[2], e[3]);
  }
  static MobiusMap from_integers(Integer p, Integer q, Integer r, Integer s) {
    if (p * s - q * r <= 0) throw Error(ErrorKind::InvalidArgument, "Mobius map needs positive determinant");
    Integer g = boost::multiprecision::gcd(boost::multiprecision::gcd(p, q), boost::multiprecision::gcd(r, s));
    MobiusMap m;
    m.e_ = {p / g, q / g, r / g, s / g};
    for (auto& x : m.e_)
      if (x != 0) {
        if (x < 0)
          for (auto& y : m.e_) y = -y;
        break;
      }
    return m;
  }
  static MobiusMap identity() { return MobiusMap(); }

  const Integer& p() const { return e_[0]; }
  const Integer& q() const { return e_[1]; }
  const Integer& r() const { return e_[2]; }
  const Integer& s() const { return e_[3]; }
  const std::array<Integer, 4>& entries() const { return e_; }
  Integer det() const { return e_[0] * e_[3] - e_[1] * e_[2]; }
  Integer trace() const { return e_[0] + e_[3]; }
  bool is_identity() const { return e_[1] == 0 && e_[2] == 0 && e_[0] == e_[3]; }

  ProjectivePoint apply(const ProjectivePoint& x) const {
    if (x.is_infinity()) {
      if (r() == 0) return ProjectivePoint::infinity();
      return ProjectivePoint(QuadraticReal(Rational(p(), r())));
    }
    const QuadraticReal& v = x.value();
    QuadraticReal den = QuadraticReal(Rational(r())) * v + QuadraticReal(Rational(s()));
    if (den.sign() == 0) return ProjectivePoint::infinity();
    QuadraticReal num = QuadraticReal(Rational(p())) * v + QuadraticReal(Rational(q()));
    return ProjectivePoint(num / den);
  }

  MobiusMap inverse() const { return from_integers(s(), -q(), -r(), p()); }

  friend MobiusMap compose(const MobiusMap& f, const MobiusMap& g) {
    return from_integers(f.p() * g.p() + f.q() * g.r(), f.p() * g.q() + f.q() * g.s(),
                         f.r() * g.p() + f.s() * g.r(), f.r() * g.q() + f.s() * g.s());
  }

  friend bool operator==(const MobiusMap&, const MobiusMap&) = default;
  friend bool operator<(const MobiusMap& f, const MobiusMap& g) { return f.e_ < g.e_; }

  std::string str() const {
    return "(" + p().str() + "," + q().str() + "," + r().str() + "," + s().str() + ")";
  }

 private:
  std::array<Integer, 4> e_;
};

using ConcreteMap = std::variant<PLMap, MobiusMap>;

inline Model model_of(const ConcreteMap& f) { return f.index() == 0 ? Model::Angle : Model::Projective; }

inline bool is_identity(const ConcreteMap& f) {
  return std::visit([](const auto& m) { return m.is_identity(); }, f);
}

inline ConcreteMap identity_map(Model m) {
  if (m == Model::Angle) return PLMap::identity();
  return MobiusMap::identity();
}

inline ConcreteMap compose(const ConcreteMap& f, const ConcreteMap& g) {
  if (f.index() != g.index()) throw Error(ErrorKind::ModelMismatch, "composing PL and Mobius maps");
  if (f.index() == 0) return compose(std::get<0>(f), std::get<0>(g));
  return compose(std::get<1>(f), std::get<1>(g));
}

inline ConcreteMap invert(const ConcreteMap& f) {
  return std::visit([](const auto& m) -> ConcreteMap { return m.inverse(); }, f);
}

inline CirclePoint evaluate(const ConcreteMap& f, const CirclePoint& x) {
  if (model_of(f) != x.model()) throw Error(ErrorKind::ModelMismatch, "map and point models differ");
  if (f.index() == 0) return CirclePoint::angle(std::get<0>(f).apply(x.as_angle().value()));
  return CirclePoint(std::get<1>(f).apply(x.as_projective()));
}

// f^n for any integer n, by repeated squaring
inline ConcreteMap power(const ConcreteMap& f, long n) {
  ConcreteMap base = n < 0 ? invert(f) : f;
  unsigned long k = n < 0 ? static_cast<unsigned long>(-n) : static_cast<unsigned long>(n);
  ConcreteMap acc = identity_map(model_of(f));
  while (k) {
    if (k & 1) acc = compose(acc, base);
    k >>= 1;
    if (k) base = compose(base, base);
  }
  return acc;
}

struct ConcreteMapLess {
  bool operator()(const ConcreteMap& f, const ConcreteMap& g) const {
    if (f.index() != g.index()) return f.index() < g.index();
    if (f.index() == 0) return std::get<0>(f) < std::get<0>(g);
    return std::get<1>(f) < std::get<1>(g);
  }
};

// ---- words ----

struct Letter {
  std::string gen;
  long exp = 1;
  friend bool operator==(const Letter&, const Letter&) = default;
  friend auto operator<=>(const Letter&, const Letter&) = default;
};

// Product s1 s2 ... sn acting on the left: sn is applied first.
class Word {
 public:
  Word() = default;
  explicit Word(std::vector<Letter> ls) {
    for (auto& l : ls) push_back(std::move(l));
  }
  static Word letter(std::string g, long e = 1) { return Word({Letter{std::move(g), e}}); }

  // appends with free reduction against the last letter
  void push_back(Letter l) {
    if (l.exp == 0) return;
    if (!ls_.empty() && ls_.back().gen == l.gen) {
      ls_.back().exp += l.exp;
      if (ls_.back().exp == 0) ls_.pop_back();
      return;
    }
    ls_.push_back(std::move(l));
  }

  const std::vector<Letter>& letters() const { return ls_; }
  bool empty() const { return ls_.empty(); }
  // length in the generators and their inverses
  long length() const {
    long n = 0;
    for (const auto& l : ls_) n += l.exp < 0 ? -l.exp : l.exp;
    return n;
  }

  Word inverse() const {
    Word w;
    for (auto it = ls_.rbegin(); it != ls_.rend(); ++it) w.push_back({it->gen, -it->exp});
    return w;
  }
  friend Word operator*(const Word& u, const Word& v) {
    Word w = u;
    for (const auto& l : v.ls_) w.push_back(l);
    return w;
  }
  friend bool operator==(const Word&, const Word&) = default;
  friend auto operator<=>(const Word&, const Word&) = default;

  std::string str() const {
    if (ls_.empty()) return "e";
    std::ostringstream os;
    for (std::size_t i = 0; i < ls_.size(); ++i) {
      if (i) os << ' ';
      os << ls_[i].gen;
      if (ls_[i].exp != 1) os << '^' << ls_[i].exp;
    }
    return os.str();
  }

  // "a b^-1 a^2"; "e" or "" is the empty word
  static Word parse(const std::string& text) {
    std::istringstream is(text);
    std::string tok;
    Word w;
    while (is >> tok) {
      if (tok == "e") continue;
      auto caret = tok.find('^');
      std::string g = tok.substr(0, caret);
      long e = 1;
      if (g.empty()) throw Error(ErrorKind::ParseError, "bad word token '" + tok + "'");
      if (caret != std::string::npos) {
        try {
          std::size_t used = 0;
          e = std::stol(tok.substr(caret + 1), &used);
          if (used != tok.size() - caret - 1) throw std::invalid_argument("trailing");
        } catch (const std::exception&) {
          throw Error(ErrorKind::ParseError, "bad exponent in '" + tok + "'");
        }
      }
      w.push_back({g, e});
    }
    return w;
  }

 private:
  std::vector<Letter> ls_;
};

// All freely reduced words of length <= maxLen over the given generators and
// their inverses, by length and then lexicographically (g before g^-1).
inline std::vector<Word> enumerate_reduced_words(const std::vector<std::string>& gens, long maxLen) {
  std::vector<Letter> alphabet;
  for (const auto& g : gens) {
    alphabet.push_back({g, 1});
    alphabet.push_back({g, -1});
  }
  std::vector<std::vector<Letter>> layer{{}};
  std::vector<Word> out{Word()};
  for (long len = 1; len <= maxLen; ++len) {
    std::vector<std::vector<Letter>> next;
    for (const auto& w : layer)
      for (const auto& a : alphabet) {
        if (!w.empty() && w.back().gen == a.gen && w.back().exp == -a.exp) continue;
        auto v = w;
        v.push_back(a);
        out.push_back(Word(v));
        next.push_back(std::move(v));
      }
    layer = std::move(next);
  }
  return out;
}

class GeneratorTable {
 public:
  GeneratorTable() = default;
  explicit GeneratorTable(Model m) : model_(m) {}

  void add(const std::string& name, ConcreteMap f) {
    if (name.empty() || name == "e" || name.find_first_of(" ^") != std::string::npos)
      throw Error(ErrorKind::InvalidArgument, "bad generator name '" + name + "'");
    if (model_of(f) != model_)
      throw Error(ErrorKind::ModelMismatch, "generator '" + name + "' is in the wrong model");
    inverses_.insert_or_assign(name, invert(f));
    gens_.insert_or_assign(name, std::move(f));
  }
  Model model() const { return model_; }
  const std::map<std::string, ConcreteMap>& generators() const { return gens_; }
  std::vector<std::string> names() const {
    std::vector<std::string> v;
    for (const auto& [k, _] : gens_) v.push_back(k);
    return v;
  }
  const ConcreteMap& get(const std::string& name, bool inverse = false) const {
    const auto& tab = inverse ? inverses_ : gens_;
    auto it = tab.find(name);
    if (it == tab.end()) throw Error(ErrorKind::UnknownGenerator, "'" + name + "'");
    return it->second;
  }

  ConcreteMap evaluate_word(const Word& w) const {
    ConcreteMap acc = identity_map(model_);
    for (const auto& l : w.letters()) acc = compose(acc, power(get(l.gen), l.exp));
    return acc;
  }
  CirclePoint apply_word(const Word& w, CirclePoint x) const {
    const auto& ls = w.letters();
    for (auto it = ls.rbegin(); it != ls.rend(); ++it) {
      const ConcreteMap& g = get(it->gen, it->exp < 0);
      long k = it->exp < 0 ? -it->exp : it->exp;
      for (long i = 0; i < k; ++i) x = laminar::evaluate(g, x);
    }
    return x;
  }

 private:
  Model model_ = Model::Angle;
  std::map<std::string, ConcreteMap> gens_;
  std::map<std::string, ConcreteMap> inverses_;
};

// a word evaluated lazily against a generator table
struct WordMap {
  Word word;
  std::shared_ptr<const GeneratorTable> table;
};

class CircleMap {
 public:
  CircleMap(PLMap f) : v_(std::move(f)) {}      // NOLINT(implicit)
  CircleMap(MobiusMap f) : v_(std::move(f)) {}  // NOLINT(implicit)
  CircleMap(WordMap f) : v_(std::move(f)) {}    // NOLINT(implicit)
  CircleMap(const ConcreteMap& f) {             // NOLINT(implicit)
    if (f.index() == 0)
      v_ = std::get<0>(f);
    else
      v_ = std::get<1>(f);
  }

  Model model() const {
    if (v_.index() == 0) return Model::Angle;
    if (v_.index() == 1) return Model::Projective;
    return std::get<2>(v_).table->model();
  }
  bool is_word() const { return v_.index() == 2; }
  const WordMap& as_word() const { return std::get<2>(v_); }

  ConcreteMap flatten() const {
    if (v_.index() == 0) return std::get<0>(v_);
    if (v_.index() == 1) return std::get<1>(v_);
    const auto& w = std::get<2>(v_);
    return w.table->evaluate_word(w.word);
  }

  friend bool operator==(const CircleMap& f, const CircleMap& g) {
    ConcreteMap a = f.flatten(), b = g.flatten();
    return a.index() == b.index() && !ConcreteMapLess{}(a, b) && !ConcreteMapLess{}(b, a);
  }

 private:
  std::variant<PLMap, MobiusMap, WordMap> v_;
};

inline CirclePoint evaluate(const CircleMap& f, const CirclePoint& x) {
  if (f.model() != x.model()) throw Error(ErrorKind::ModelMismatch, "map and point models differ");
  if (f.is_word()) return f.as_word().table->apply_word(f.as_word().word, x);
  return evaluate(f.flatten(), x);
}

inline CircleMap compose(const CircleMap& f, const CircleMap& g) {
  if (f.model() != g.model()) throw Error(ErrorKind::ModelMismatch, "composing maps from different models");
  if (f.is_word() && g.is_word() && f.as_word().table == g.as_word().table)
    return WordMap{f.as_word().word * g.as_word().word, f.as_word().table};
  return compose(f.flatten(), g.flatten());
}

inline CircleMap invert(const CircleMap& f) {
  if (f.is_word()) return WordMap{f.as_word().word.inverse(), f.as_word().table};
  return invert(f.flatten());
}

}  // namespace laminar
