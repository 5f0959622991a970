#include "ltlgrid/symbols.hpp"

#include <algorithm>
#include <cctype>

#include "ltlgrid/error.hpp"
#include "guard_eval.hpp"

namespace ltlgrid {

Symbol::Symbol(std::vector<AtomicPredicate> aps) : aps_(std::move(aps)) {
  std::sort(aps_.begin(), aps_.end());
  aps_.erase(std::unique(aps_.begin(), aps_.end()), aps_.end());
}

bool Symbol::contains(const AtomicPredicate& ap) const {
  return std::binary_search(aps_.begin(), aps_.end(), ap);
}

std::set<int> Symbol::robots() const {
  std::set<int> out;
  for (const auto& ap : aps_) out.insert(ap.robot);
  return out;
}

std::vector<std::string> Symbol::regions_of(int robot) const {
  std::vector<std::string> out;
  for (const auto& ap : aps_)
    if (ap.robot == robot) out.push_back(ap.region);
  return out;
}

Symbol Symbol::restricted_to(const std::set<AtomicPredicate>& universe) const {
  std::vector<AtomicPredicate> kept;
  for (const auto& ap : aps_)
    if (universe.contains(ap)) kept.push_back(ap);
  return Symbol(std::move(kept));
}

std::string Symbol::to_string() const {
  std::string out = "{";
  for (std::size_t i = 0; i < aps_.size(); ++i) {
    if (i) out += ',';
    out += aps_[i].to_string();
  }
  return out + "}";
}

Symbol parse_symbol(std::string_view text) {
  std::string body;
  for (char c : text)
    if (!std::isspace(static_cast<unsigned char>(c)) && c != '{' && c != '}') body += c;
  std::vector<AtomicPredicate> aps;
  std::size_t start = 0;
  while (start < body.size()) {
    auto comma = body.find(',', start);
    if (comma == std::string::npos) comma = body.size();
    if (comma > start) aps.push_back(parse_atomic_predicate(std::string_view(body).substr(start, comma - start)));
    start = comma + 1;
  }
  return Symbol(std::move(aps));
}

void RegionRelation::declare_overlap(const std::string& a, const std::string& b) {
  if (a == b) return;
  overlaps_.insert(a < b ? std::make_pair(a, b) : std::make_pair(b, a));
}

bool RegionRelation::disjoint(const std::string& a, const std::string& b) const {
  if (a == b) return false;
  if (a == kObstacleRegion || b == kObstacleRegion) return false;
  return !overlaps_.contains(a < b ? std::make_pair(a, b) : std::make_pair(b, a));
}

bool is_feasible_symbol(const Symbol& s, const RegionRelation& rel) {
  const auto& aps = s.aps();
  // aps are sorted by robot, so same-robot predicates are contiguous
  for (std::size_t i = 0; i < aps.size(); ++i)
    for (std::size_t k = i + 1; k < aps.size() && aps[k].robot == aps[i].robot; ++k)
      if (rel.disjoint(aps[i].region, aps[k].region)) return false;
  return true;
}

bool evaluate_guard(const Formula& g, const Symbol& s) {
  switch (g.kind()) {
    case FormulaKind::True: return true;
    case FormulaKind::False: return false;
    case FormulaKind::Atom: return s.contains(g.ap());
    case FormulaKind::Not: return !evaluate_guard(g.child(0), s);
    case FormulaKind::And: return evaluate_guard(g.lhs(), s) && evaluate_guard(g.rhs(), s);
    case FormulaKind::Or: return evaluate_guard(g.lhs(), s) || evaluate_guard(g.rhs(), s);
    default:
      throw Error(ErrorCode::validation, "guard contains a temporal operator: " + to_string(g));
  }
}

std::string Target::to_string() const {
  if (regions.empty()) return "free";
  std::string out;
  for (std::size_t i = 0; i < regions.size(); ++i) {
    if (i) out += '&';
    out += regions[i];
  }
  return out;
}

namespace {

class Enumerator {
 public:
  Enumerator(const Formula& guard, const RegionRelation& rel, std::size_t cap) : rel_(rel) {
    auto aps = atomic_predicates(guard);
    if (aps.size() > cap)
      throw Error(ErrorCode::resource, "guard mentions " + std::to_string(aps.size()) +
                                           " atomic predicates, above the enumeration cap of " + std::to_string(cap));
    vars_.assign(aps.begin(), aps.end());
    compiled_ = detail::CompiledGuard(guard, vars_);
    values_.assign(vars_.size(), detail::Tri::Unknown);
  }

  void run(bool stop_at_first) {
    stop_at_first_ = stop_at_first;
    recurse(0);
  }

  std::vector<Symbol> found;
  const std::vector<AtomicPredicate>& vars() const { return vars_; }

 private:
  bool compatible(std::size_t var) const {
    for (std::size_t i = 0; i < var; ++i)
      if (values_[i] == detail::Tri::True && vars_[i].robot == vars_[var].robot &&
          rel_.disjoint(vars_[i].region, vars_[var].region))
        return false;
    return true;
  }

  bool recurse(std::size_t var) {
    detail::Tri v = compiled_.eval(values_);
    if (v == detail::Tri::False) return false;
    if (var == vars_.size()) {
      std::vector<AtomicPredicate> aps;
      for (std::size_t i = 0; i < vars_.size(); ++i)
        if (values_[i] == detail::Tri::True) aps.push_back(vars_[i]);
      found.emplace_back(std::move(aps));
      return stop_at_first_;
    }
    values_[var] = detail::Tri::False;
    if (recurse(var + 1)) return true;
    if (compatible(var)) {
      values_[var] = detail::Tri::True;
      if (recurse(var + 1)) return true;
    }
    values_[var] = detail::Tri::Unknown;
    return false;
  }

  const RegionRelation& rel_;
  std::vector<AtomicPredicate> vars_;
  detail::CompiledGuard compiled_;
  std::vector<detail::Tri> values_;
  bool stop_at_first_ = false;
};

}  // namespace

SymbolSetResult feasible_symbols_of_guard(const Formula& guard, const RegionRelation& rel, std::size_t cap) {
  Enumerator e(guard, rel, cap);
  e.run(false);
  SymbolSetResult out;
  for (const auto& ap : e.vars()) out.guard_robots.insert(ap.robot);
  out.symbols = std::move(e.found);
  std::sort(out.symbols.begin(), out.symbols.end());
  for (const auto& s : out.symbols) {
    out.active_robots.push_back(s.robots());
    out.targets.push_back(symbol_targets(s, out.guard_robots, rel));
  }
  return out;
}

bool has_feasible_symbol(const Formula& guard, const RegionRelation& rel, std::size_t cap) {
  Enumerator e(guard, rel, cap);
  e.run(true);
  return !e.found.empty();
}

std::map<int, Target> symbol_targets(const Symbol& s, const std::set<int>& guard_robots, const RegionRelation& rel) {
  if (!is_feasible_symbol(s, rel))
    throw Error(ErrorCode::validation, "symbol " + s.to_string() + " puts a robot in disjoint regions");
  std::map<int, Target> out;
  for (int j : guard_robots) out[j] = Target{};
  for (const auto& ap : s.aps()) out[ap.robot].regions.push_back(ap.region);
  return out;
}

}  // namespace ltlgrid
