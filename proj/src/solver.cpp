#include "cmol/solver.hpp"

#include "cmol/error.hpp"
#include "cmol/rng.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <sys/wait.h>
#include <unistd.h>

namespace cmol {

std::string_view to_string(SolveStatus status) {
  switch (status) {
  case SolveStatus::Sat: return "SAT";
  case SolveStatus::Unsat: return "UNSAT";
  case SolveStatus::TimedOut: return "TIMEOUT";
  }
  return "?";
}

namespace {

using Lit = std::uint32_t;
using CRef = std::uint32_t;

constexpr Lit kNoLit = UINT32_MAX;
constexpr CRef kNoReason = UINT32_MAX;
constexpr CRef kBinaryTag = 0x80000000u;

inline Lit make_lit(int dimacs) {
  return dimacs > 0 ? static_cast<Lit>(2 * (dimacs - 1)) : static_cast<Lit>(2 * (-dimacs - 1) + 1);
}
inline int to_dimacs(Lit l) { return (l & 1) ? -static_cast<int>(l / 2 + 1) : static_cast<int>(l / 2 + 1); }
inline std::uint32_t var_of(Lit l) { return l >> 1; }
inline Lit negate(Lit l) { return l ^ 1u; }

enum : std::int8_t { kFalse = -1, kUndef = 0, kTrue = 1 };

/// Luby sequence value for index i (y = 2).
double luby(std::uint64_t i) {
  std::uint64_t size = 1, seq = 0;
  while (size < i + 1) {
    ++seq;
    size = 2 * size + 1;
  }
  while (size - 1 != i) {
    size = (size - 1) >> 1;
    --seq;
    i = i % size;
  }
  return static_cast<double>(1ull << seq);
}

struct Watcher {
  CRef cref;  ///< kBinaryTag for implicit binary clauses
  Lit blocker;
};

class Cdcl {
public:
  Cdcl(const CnfFormula& cnf, const SolverOptions& options)
      : options_(options), num_vars_(static_cast<std::uint32_t>(cnf.num_vars())) {
    const std::size_t n = num_vars_;
    assigns_.assign(n, kUndef);
    level_.assign(n, 0);
    reason_.assign(n, kNoReason);
    activity_.assign(n, 0.0);
    polarity_.assign(n, 1);  // 1 = negative phase
    seen_.assign(n, 0);
    watches_.resize(2 * n);
    heap_index_.assign(n, -1);
    if (options.seed != 0) {
      Rng rng(options.seed);
      for (auto& a : activity_)
        a = rng.uniform() * 1e-5;
    }
    for (std::uint32_t v = 0; v < n; ++v)
      heap_insert(v);
    load(cnf);
  }

  SolveResult run() {
    const auto start = Clock::now();
    start_ = start;
    SolveResult result;
    result.status = search_all();
    stats_.seconds = std::chrono::duration<double>(Clock::now() - start).count();
    result.stats = stats_;
    if (result.status == SolveStatus::Sat) {
      result.model.resize(num_vars_);
      for (std::uint32_t v = 0; v < num_vars_; ++v)
        result.model[v] = assigns_[v] == kTrue;
    }
    return result;
  }

private:
  using Clock = std::chrono::steady_clock;

  // ---- clause arena: [size|learnt<<30|deleted<<31][lbd][activity] lits...
  std::uint32_t& header(CRef c) { return arena_[c]; }
  std::uint32_t clause_size(CRef c) const { return arena_[c] & 0x3fffffffu; }
  bool is_learnt(CRef c) const { return (arena_[c] >> 30) & 1u; }
  bool is_deleted(CRef c) const { return (arena_[c] >> 31) & 1u; }
  Lit* lits(CRef c) { return arena_.data() + c + 3; }
  std::uint32_t& lbd(CRef c) { return arena_[c + 1]; }
  float clause_activity(CRef c) const {
    float f;
    std::memcpy(&f, &arena_[c + 2], sizeof f);
    return f;
  }
  void set_clause_activity(CRef c, float f) { std::memcpy(&arena_[c + 2], &f, sizeof f); }

  CRef alloc(std::span<const Lit> ls, bool learnt) {
    const auto c = static_cast<CRef>(arena_.size());
    if (arena_.size() + ls.size() + 3 >= kBinaryTag)
      throw InputError("formula too large for the embedded solver");
    arena_.push_back(static_cast<std::uint32_t>(ls.size()) | (learnt ? 1u << 30 : 0u));
    arena_.push_back(0);
    arena_.push_back(0);
    arena_.insert(arena_.end(), ls.begin(), ls.end());
    return c;
  }

  void attach(CRef c) {
    Lit* l = lits(c);
    watches_[l[0]].push_back({c, l[1]});
    watches_[l[1]].push_back({c, l[0]});
  }

  // ---- assignment
  std::int8_t value(Lit l) const {
    const std::int8_t v = assigns_[var_of(l)];
    return (l & 1) ? static_cast<std::int8_t>(-v) : v;
  }
  std::uint32_t decision_level() const { return static_cast<std::uint32_t>(trail_lim_.size()); }

  void enqueue(Lit l, CRef reason) {
    const auto v = var_of(l);
    assigns_[v] = (l & 1) ? kFalse : kTrue;
    level_[v] = decision_level();
    reason_[v] = reason;
    trail_.push_back(l);
  }

  void load(const CnfFormula& cnf) {
    std::vector<Lit> buf;
    for (std::size_t i = 0; i < cnf.num_clauses() && !unsat_; ++i) {
      buf.clear();
      for (int d : cnf.clause(i))
        buf.push_back(make_lit(d));
      std::sort(buf.begin(), buf.end());
      buf.erase(std::unique(buf.begin(), buf.end()), buf.end());
      bool tautology = false;
      for (std::size_t k = 1; k < buf.size(); ++k)
        if (buf[k] == negate(buf[k - 1]))
          tautology = true;
      if (tautology)
        continue;
      add_input_clause(buf);
    }
  }

  void add_input_clause(std::vector<Lit>& ls) {
    if (ls.empty()) {
      unsat_ = true;
      return;
    }
    if (ls.size() == 1) {
      const auto v = value(ls[0]);
      if (v == kFalse)
        unsat_ = true;
      else if (v == kUndef)
        enqueue(ls[0], kNoReason);
      return;
    }
    if (ls.size() == 2) {
      watches_[ls[0]].push_back({kBinaryTag, ls[1]});
      watches_[ls[1]].push_back({kBinaryTag, ls[0]});
      return;
    }
    const CRef c = alloc(ls, false);
    originals_.push_back(c);
    attach(c);
  }

  /// Returns true on conflict; the conflicting clause is in conflict_.
  bool propagate() {
    while (qhead_ < trail_.size()) {
      const Lit p = trail_[qhead_++];
      const Lit false_lit = negate(p);
      auto& ws = watches_[false_lit];
      ++stats_.propagations;
      std::size_t i = 0, j = 0;
      const std::size_t n = ws.size();
      while (i < n) {
        const Watcher w = ws[i];
        if (w.cref == kBinaryTag) {
          ws[j++] = ws[i++];
          const auto v = value(w.blocker);
          if (v == kTrue)
            continue;
          if (v == kFalse) {
            set_binary_conflict(false_lit, w.blocker);
            while (i < n)
              ws[j++] = ws[i++];
            ws.resize(j);
            return true;
          }
          enqueue(w.blocker, kBinaryTag | false_lit);
          continue;
        }
        if (value(w.blocker) == kTrue) {
          ws[j++] = ws[i++];
          continue;
        }
        const CRef c = w.cref;
        Lit* l = lits(c);
        if (l[0] == false_lit)
          std::swap(l[0], l[1]);
        ++i;
        const Lit first = l[0];
        if (first != w.blocker && value(first) == kTrue) {
          ws[j++] = {c, first};
          continue;
        }
        const std::uint32_t size = clause_size(c);
        bool moved = false;
        for (std::uint32_t k = 2; k < size; ++k)
          if (value(l[k]) != kFalse) {
            std::swap(l[1], l[k]);
            watches_[l[1]].push_back({c, first});
            moved = true;
            break;
          }
        if (moved)
          continue;
        ws[j++] = {c, first};
        if (value(first) == kFalse) {
          conflict_ = c;
          while (i < n)
            ws[j++] = ws[i++];
          ws.resize(j);
          return true;
        }
        enqueue(first, c);
      }
      ws.resize(j);
    }
    return false;
  }

  void set_binary_conflict(Lit a, Lit b) {
    conflict_ = kBinaryTag;
    binary_conflict_[0] = a;
    binary_conflict_[1] = b;
  }

  // ---- VSIDS heap (max-heap on activity)
  bool heap_less(std::uint32_t a, std::uint32_t b) const { return activity_[a] > activity_[b]; }
  void heap_up(std::size_t i) {
    const auto v = heap_[i];
    while (i > 0) {
      const std::size_t parent = (i - 1) / 2;
      if (!heap_less(v, heap_[parent]))
        break;
      heap_[i] = heap_[parent];
      heap_index_[heap_[i]] = static_cast<int>(i);
      i = parent;
    }
    heap_[i] = v;
    heap_index_[v] = static_cast<int>(i);
  }
  void heap_down(std::size_t i) {
    const auto v = heap_[i];
    for (;;) {
      std::size_t child = 2 * i + 1;
      if (child >= heap_.size())
        break;
      if (child + 1 < heap_.size() && heap_less(heap_[child + 1], heap_[child]))
        ++child;
      if (!heap_less(heap_[child], v))
        break;
      heap_[i] = heap_[child];
      heap_index_[heap_[i]] = static_cast<int>(i);
      i = child;
    }
    heap_[i] = v;
    heap_index_[v] = static_cast<int>(i);
  }
  void heap_insert(std::uint32_t v) {
    if (heap_index_[v] >= 0)
      return;
    heap_.push_back(v);
    heap_up(heap_.size() - 1);
  }
  std::uint32_t heap_pop() {
    const auto top = heap_[0];
    heap_index_[top] = -1;
    const auto last = heap_.back();
    heap_.pop_back();
    if (!heap_.empty()) {
      heap_[0] = last;
      heap_index_[last] = 0;
      heap_down(0);
    }
    return top;
  }

  void bump_var(std::uint32_t v) {
    if ((activity_[v] += var_inc_) > 1e100) {
      for (auto& a : activity_)
        a *= 1e-100;
      var_inc_ *= 1e-100;
    }
    if (heap_index_[v] >= 0)
      heap_up(static_cast<std::size_t>(heap_index_[v]));
  }
  void bump_clause(CRef c) {
    float a = clause_activity(c) + static_cast<float>(clause_inc_);
    set_clause_activity(c, a);
    if (a > 1e20f) {
      for (CRef l : learnts_)
        set_clause_activity(l, clause_activity(l) * 1e-20f);
      clause_inc_ *= 1e-20;
    }
  }

  // ---- conflict analysis
  /// Literals of a reason or conflict other than `skip`.
  template <class F> void for_other_lits(CRef c, Lit skip, F&& f) {
    if (c & kBinaryTag) {
      f(static_cast<Lit>(c & ~kBinaryTag));
      return;
    }
    Lit* l = lits(c);
    for (std::uint32_t k = 0; k < clause_size(c); ++k)
      if (l[k] != skip)
        f(l[k]);
  }

  void analyze(std::vector<Lit>& learnt, std::uint32_t& backtrack_level) {
    learnt.clear();
    learnt.push_back(kNoLit);
    int path = 0;
    Lit p = kNoLit;
    std::size_t index = trail_.size();
    auto visit = [&](Lit q) {
      const auto v = var_of(q);
      if (seen_[v] || level_[v] == 0)
        return;
      bump_var(v);
      seen_[v] = 1;
      if (level_[v] >= decision_level())
        ++path;
      else
        learnt.push_back(q);
    };
    if (conflict_ == kBinaryTag) {
      visit(binary_conflict_[0]);
      visit(binary_conflict_[1]);
    } else {
      if (is_learnt(conflict_))
        bump_clause(conflict_);
      for_other_lits(conflict_, kNoLit, visit);
    }
    for (;;) {
      while (!seen_[var_of(trail_[--index])]) {
      }
      p = trail_[index];
      seen_[var_of(p)] = 0;
      if (--path == 0)
        break;
      const CRef r = reason_[var_of(p)];
      if (!(r & kBinaryTag) && is_learnt(r))
        bump_clause(r);
      for_other_lits(r, p, visit);
    }
    learnt[0] = negate(p);

    // recursive minimization
    analyze_toclear_.assign(learnt.begin(), learnt.end());
    std::uint32_t abstract_levels = 0;
    for (std::size_t k = 1; k < learnt.size(); ++k)
      abstract_levels |= abstract_level(var_of(learnt[k]));
    std::size_t keep = 1;
    for (std::size_t k = 1; k < learnt.size(); ++k)
      if (reason_[var_of(learnt[k])] == kNoReason || !redundant(learnt[k], abstract_levels))
        learnt[keep++] = learnt[k];
    learnt.resize(keep);
    for (Lit l : analyze_toclear_)
      seen_[var_of(l)] = 0;

    if (learnt.size() == 1) {
      backtrack_level = 0;
    } else {
      std::size_t max_i = 1;
      for (std::size_t k = 2; k < learnt.size(); ++k)
        if (level_[var_of(learnt[k])] > level_[var_of(learnt[max_i])])
          max_i = k;
      std::swap(learnt[1], learnt[max_i]);
      backtrack_level = level_[var_of(learnt[1])];
    }
  }

  std::uint32_t abstract_level(std::uint32_t v) const { return 1u << (level_[v] & 31u); }

  bool redundant(Lit p, std::uint32_t abstract_levels) {
    stack_.clear();
    stack_.push_back(p);
    const std::size_t top = analyze_toclear_.size();
    while (!stack_.empty()) {
      const Lit q = stack_.back();
      stack_.pop_back();
      const CRef r = reason_[var_of(q)];
      bool failed = false;
      for_other_lits(r, negate(q), [&](Lit l) {
        if (failed)
          return;
        const auto v = var_of(l);
        if (seen_[v] || level_[v] == 0)
          return;
        if (reason_[v] != kNoReason && (abstract_level(v) & abstract_levels) != 0) {
          seen_[v] = 1;
          stack_.push_back(l);
          analyze_toclear_.push_back(l);
        } else {
          failed = true;
        }
      });
      if (failed) {
        for (std::size_t k = top; k < analyze_toclear_.size(); ++k)
          seen_[var_of(analyze_toclear_[k])] = 0;
        analyze_toclear_.resize(top);
        return false;
      }
    }
    return true;
  }

  std::uint32_t compute_lbd(std::span<const Lit> ls) {
    ++lbd_stamp_;
    if (lbd_seen_.size() <= num_vars_)
      lbd_seen_.resize(num_vars_ + 1, 0);
    std::uint32_t count = 0;
    for (Lit l : ls) {
      const auto lv = level_[var_of(l)];
      if (lbd_seen_[lv] != lbd_stamp_) {
        lbd_seen_[lv] = lbd_stamp_;
        ++count;
      }
    }
    return count;
  }

  void cancel_until(std::uint32_t lvl) {
    if (decision_level() <= lvl)
      return;
    for (std::size_t c = trail_.size(); c-- > trail_lim_[lvl];) {
      const auto v = var_of(trail_[c]);
      polarity_[v] = static_cast<std::uint8_t>(trail_[c] & 1);
      assigns_[v] = kUndef;
      reason_[v] = kNoReason;
      heap_insert(v);
    }
    trail_.resize(trail_lim_[lvl]);
    trail_lim_.resize(lvl);
    qhead_ = trail_.size();
  }

  Lit pick_branch() {
    while (!heap_.empty()) {
      const auto v = heap_pop();
      if (assigns_[v] == kUndef)
        return static_cast<Lit>(2 * v + polarity_[v]);
    }
    return kNoLit;
  }

  bool is_locked(CRef c) {
    const Lit first = lits(c)[0];
    return value(first) == kTrue && reason_[var_of(first)] == c;
  }

  void reduce_db() {
    std::sort(learnts_.begin(), learnts_.end(), [&](CRef a, CRef b) {
      if (lbd(a) != lbd(b))
        return lbd(a) > lbd(b);
      return clause_activity(a) < clause_activity(b);
    });
    const std::size_t target = learnts_.size() / 2;
    std::size_t removed = 0;
    std::vector<CRef> kept;
    kept.reserve(learnts_.size());
    for (CRef c : learnts_) {
      if (removed < target && lbd(c) > 2 && !is_locked(c)) {
        header(c) |= 1u << 31;
        wasted_ += clause_size(c) + 3;
        ++removed;
      } else {
        kept.push_back(c);
      }
    }
    learnts_ = std::move(kept);
    for (auto& ws : watches_)
      std::erase_if(ws, [&](const Watcher& w) { return w.cref != kBinaryTag && is_deleted(w.cref); });
    if (wasted_ > arena_.size() / 2)
      collect_garbage();
  }

  void collect_garbage() {
    std::vector<std::uint32_t> fresh;
    fresh.reserve(arena_.size() - wasted_);
    auto relocate = [&](CRef c) {
      const auto n = static_cast<CRef>(fresh.size());
      fresh.insert(fresh.end(), arena_.begin() + c, arena_.begin() + c + 3 + clause_size(c));
      arena_[c + 1] = n;  // forwarding pointer (lbd is copied already)
      return n;
    };
    std::vector<CRef> new_originals, new_learnts;
    for (CRef c : originals_)
      new_originals.push_back(relocate(c));
    for (CRef c : learnts_)
      new_learnts.push_back(relocate(c));
    auto forward = [&](CRef c) { return arena_[c + 1]; };
    for (auto& ws : watches_)
      for (auto& w : ws)
        if (w.cref != kBinaryTag)
          w.cref = forward(w.cref);
    for (Lit l : trail_) {
      auto& r = reason_[var_of(l)];
      if (r != kNoReason && !(r & kBinaryTag))
        r = forward(r);
    }
    arena_ = std::move(fresh);
    originals_ = std::move(new_originals);
    learnts_ = std::move(new_learnts);
    wasted_ = 0;
  }

  bool out_of_budget() {
    if (options_.conflict_limit && stats_.conflicts >= options_.conflict_limit)
      return true;
    if (options_.time_limit_seconds > 0 &&
        std::chrono::duration<double>(Clock::now() - start_).count() >= options_.time_limit_seconds)
      return true;
    return false;
  }

  void report_learnt(std::span<const Lit> ls) {
    if (!options_.on_learnt)
      return;
    std::vector<int> d;
    for (Lit l : ls)
      d.push_back(to_dimacs(l));
    options_.on_learnt(d);
  }

  enum class Outcome { Sat, Unsat, Restart, Budget };

  /// Search until `conflict_budget` conflicts.
  Outcome search(std::uint64_t conflict_budget) {
    std::uint64_t conflicts_here = 0;
    std::vector<Lit> learnt;
    for (;;) {
      if (propagate()) {
        ++stats_.conflicts;
        ++conflicts_here;
        if (decision_level() == 0)
          return Outcome::Unsat;
        std::uint32_t bt = 0;
        analyze(learnt, bt);
        cancel_until(bt);
        report_learnt(learnt);
        ++stats_.learnt_clauses;
        if (learnt.size() == 1) {
          enqueue(learnt[0], kNoReason);
        } else if (learnt.size() == 2) {
          watches_[learnt[0]].push_back({kBinaryTag, learnt[1]});
          watches_[learnt[1]].push_back({kBinaryTag, learnt[0]});
          enqueue(learnt[0], kBinaryTag | learnt[1]);
        } else {
          const CRef c = alloc(learnt, true);
          lbd(c) = compute_lbd(learnt);
          learnts_.push_back(c);
          attach(c);
          bump_clause(c);
          enqueue(learnt[0], c);
        }
        var_inc_ /= 0.95;
        clause_inc_ /= 0.999;
        if (out_of_budget())
          return Outcome::Budget;
        continue;
      }
      if (conflicts_here >= conflict_budget) {
        cancel_until(0);
        return Outcome::Restart;
      }
      if (stats_.conflicts >= next_reduce_) {
        next_reduce_ = stats_.conflicts + 2000 + 300 * ++reductions_;
        reduce_db();
      }
      if ((stats_.decisions & 1023) == 0 && out_of_budget())
        return Outcome::Budget;
      const Lit next = pick_branch();
      if (next == kNoLit)
        return Outcome::Sat;
      ++stats_.decisions;
      trail_lim_.push_back(trail_.size());
      enqueue(next, kNoReason);
    }
  }

  SolveStatus search_all() {
    if (unsat_)
      return SolveStatus::Unsat;
    for (std::uint64_t restart = 0;; ++restart) {
      const auto r = search(static_cast<std::uint64_t>(luby(restart) * 100));
      if (r == Outcome::Sat)
        return SolveStatus::Sat;
      if (r == Outcome::Unsat)
        return SolveStatus::Unsat;
      if (r == Outcome::Budget || out_of_budget())
        return SolveStatus::TimedOut;
      ++stats_.restarts;
    }
  }

  const SolverOptions& options_;
  std::uint32_t num_vars_;
  bool unsat_ = false;
  Clock::time_point start_;
  SolveStats stats_;

  std::vector<std::uint32_t> arena_;
  std::vector<CRef> originals_;
  std::vector<CRef> learnts_;
  std::size_t wasted_ = 0;
  std::vector<std::vector<Watcher>> watches_;

  std::vector<std::int8_t> assigns_;
  std::vector<std::uint32_t> level_;
  std::vector<CRef> reason_;
  std::vector<Lit> trail_;
  std::vector<std::size_t> trail_lim_;
  std::size_t qhead_ = 0;

  std::vector<double> activity_;
  double var_inc_ = 1.0;
  double clause_inc_ = 1.0;
  std::vector<std::uint32_t> heap_;
  std::vector<int> heap_index_;
  std::vector<std::uint8_t> polarity_;

  CRef conflict_ = kNoReason;
  Lit binary_conflict_[2] = {kNoLit, kNoLit};
  std::vector<std::uint8_t> seen_;
  std::vector<Lit> analyze_toclear_;
  std::vector<Lit> stack_;
  std::vector<std::uint64_t> lbd_seen_;
  std::uint64_t lbd_stamp_ = 0;
  std::uint64_t next_reduce_ = 2000;
  std::uint64_t reductions_ = 0;
};

void audit(const CnfFormula& cnf, const SolveResult& result) {
  if (result.status == SolveStatus::Sat && !check_model(cnf, result.model))
    throw InternalError("solver returned a model that violates the formula");
}

} // namespace

SolveResult solve(const CnfFormula& cnf, const SolverOptions& options) {
  Cdcl solver(cnf, options);
  auto result = solver.run();
  audit(cnf, result);
  return result;
}

SolveResult parse_competition_output(std::string_view text, int num_vars) {
  std::istringstream in{std::string(text)};
  SolveResult result;
  std::optional<SolveStatus> status;
  Model model(static_cast<std::size_t>(std::max(num_vars, 0)), false);
  std::string line;
  while (std::getline(in, line)) {
    if (line.rfind("s ", 0) == 0) {
      const auto verdict = line.substr(2);
      if (verdict.rfind("SATISFIABLE", 0) == 0)
        status = SolveStatus::Sat;
      else if (verdict.rfind("UNSATISFIABLE", 0) == 0)
        status = SolveStatus::Unsat;
      else
        status = SolveStatus::TimedOut;
    } else if (line.rfind("v ", 0) == 0 || line == "v") {
      std::istringstream ls(line.substr(1));
      long lit = 0;
      while (ls >> lit) {
        if (lit == 0)
          continue;
        const auto v = static_cast<std::size_t>(lit > 0 ? lit : -lit);
        if (v > model.size())
          throw InputError("solver output mentions variable " + std::to_string(v) + " beyond " +
                           std::to_string(num_vars));
        model[v - 1] = lit > 0;
      }
    }
  }
  if (!status)
    throw InputError("solver output has no 's' verdict line");
  result.status = *status;
  if (result.status == SolveStatus::Sat)
    result.model = std::move(model);
  return result;
}

SolveResult solve_external(const CnfFormula& cnf, const std::string& command, const SolverOptions& options) {
  namespace fs = std::filesystem;
  char path_template[] = "/tmp/cmol-XXXXXX.cnf";
  const int fd = mkstemps(path_template, 4);
  if (fd < 0)
    throw InputError("cannot create temporary DIMACS file");
  ::close(fd);
  const fs::path path(path_template);
  {
    std::ofstream out(path);
    out << emit_dimacs(cnf);
  }
  std::string cmd = command;
  if (auto pos = cmd.find("{}"); pos != std::string::npos)
    cmd.replace(pos, 2, path.string());
  else
    cmd += " " + path.string();
  if (options.time_limit_seconds > 0)
    cmd = "timeout " + std::to_string(static_cast<long>(std::ceil(options.time_limit_seconds))) + " " + cmd;

  const auto start = std::chrono::steady_clock::now();
  std::string output;
  FILE* pipe = ::popen(cmd.c_str(), "r");
  if (!pipe) {
    fs::remove(path);
    throw InputError("cannot run external solver: " + command);
  }
  char buf[4096];
  std::size_t n = 0;
  while ((n = std::fread(buf, 1, sizeof buf, pipe)) > 0)
    output.append(buf, n);
  const int status = ::pclose(pipe);
  fs::remove(path);
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  SolveResult result;
  try {
    result = parse_competition_output(output, cnf.num_vars());
  } catch (const InputError&) {
    // coreutils timeout exits with 124 when it had to stop the solver
    if (options.time_limit_seconds > 0 && WIFEXITED(status) && WEXITSTATUS(status) == 124) {
      result.status = SolveStatus::TimedOut;
    } else {
      throw;
    }
  }
  result.stats.seconds = seconds;
  audit(cnf, result);
  return result;
}

} // namespace cmol
