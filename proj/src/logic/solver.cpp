#include "nullcause/logic/solver.hpp"

#include <pthread.h>

#include <map>
#include <utility>

namespace nullcause::logic {

UnknownPredicate::UnknownPredicate(const std::string& name, int arity)
    : std::runtime_error("unknown predicate " + name + "/" +
                         std::to_string(arity)),
      predicate(name),
      arity(arity) {}

DepthExceeded::DepthExceeded(long long limit)
    : std::runtime_error("resolution depth limit exceeded (" +
                         std::to_string(limit) + " frames)") {}

EngineError::EngineError(const std::string& msg) : std::runtime_error(msg) {}

namespace {

// One barrier per predicate call; '!' sets cut on the barrier of the call
// whose clause body contains it. Choice-point loops stop as soon as any
// barrier on their ancestor chain is cut, which both prunes the remaining
// clauses of the cut call and keeps goals left of the cut from being retried.
struct CutBarrier {
  CutBarrier* parent = nullptr;
  bool cut = false;
  // Context of the clause currently being tried, for Cut trace events.
  TermPtr goal_rt;
  int cur_index = -1;
  int cur_ordinal = 0;
  int cur_line = 0;
  int remaining = 0;
};

bool cut_signalled(const CutBarrier* b) {
  for (; b; b = b->parent)
    if (b->cut) return true;
  return false;
}

using Cont = std::function<bool()>;  // returns true to halt the whole search

class Search {
 public:
  Search(const KnowledgeBase& kb, const SolveOptions& opts)
      : kb_(kb), opts_(opts) {}

  void run(const Query& q,
           const std::function<bool(const Solution&)>& on_sol) {
    slots_.clear();
    trail_.clear();
    slots_.resize(static_cast<std::size_t>(q.num_vars));
    TermPtr goal_rt = instantiate(q.goal, 0);
    CutBarrier root;
    solve_goal(goal_rt, &root, 0, [&]() -> bool {
      Solution s;
      s.var_names = q.var_names;
      s.bindings.reserve(q.num_vars);
      for (int i = 0; i < q.num_vars; ++i) {
        std::string name = i < static_cast<int>(q.var_names.size())
                               ? q.var_names[i]
                               : std::string("_");
        s.bindings.push_back(resolve(mk_var(i, std::move(name))));
      }
      s.top_clause_ordinal = top_ordinal_;
      s.top_clause_index = top_index_;
      return !on_sol(s);
    });
  }

 private:
  TermPtr deref(TermPtr t) const {
    while (t->kind == TermKind::Var) {
      std::size_t v = static_cast<std::size_t>(t->var);
      if (v >= slots_.size() || !slots_[v]) return t;
      t = slots_[v];
    }
    return t;
  }

  TermPtr resolve(const TermPtr& t) const {
    TermPtr d = deref(t);
    if (d->kind != TermKind::Compound) return d;
    std::vector<TermPtr> args;
    args.reserve(d->args.size());
    bool changed = false;
    for (const auto& a : d->args) {
      TermPtr r = resolve(a);
      changed = changed || r.get() != a.get();
      args.push_back(std::move(r));
    }
    if (!changed) return d;
    return mk_compound(d->text, std::move(args));
  }

  TermPtr instantiate(const TermPtr& t, int base) {
    switch (t->kind) {
      case TermKind::Var:
        return mk_var(base + t->var, t->text);
      case TermKind::Compound: {
        std::vector<TermPtr> args;
        args.reserve(t->args.size());
        bool changed = false;
        for (const auto& a : t->args) {
          TermPtr r = instantiate(a, base);
          changed = changed || r.get() != a.get();
          args.push_back(std::move(r));
        }
        if (!changed) return t;
        return mk_compound(t->text, std::move(args));
      }
      default:
        return t;
    }
  }

  bool unify_rt(const TermPtr& a0, const TermPtr& b0) {
    TermPtr a = deref(a0);
    TermPtr b = deref(b0);
    if (a->kind == TermKind::Var && b->kind == TermKind::Var &&
        a->var == b->var)
      return true;
    if (a->kind == TermKind::Var) return bind(a->var, b);
    if (b->kind == TermKind::Var) return bind(b->var, a);
    if (a->kind != b->kind) return false;
    switch (a->kind) {
      case TermKind::Atom:
      case TermKind::Str:
        return a->text == b->text;
      case TermKind::Int:
        return a->value == b->value;
      case TermKind::Compound: {
        if (a->text != b->text || a->args.size() != b->args.size())
          return false;
        for (std::size_t i = 0; i < a->args.size(); ++i)
          if (!unify_rt(a->args[i], b->args[i])) return false;
        return true;
      }
      case TermKind::Var:
        break;
    }
    return false;
  }

  bool bind(int var, TermPtr value) {
    slots_[static_cast<std::size_t>(var)] = std::move(value);
    trail_.push_back(var);
    return true;
  }

  void undo_to(std::size_t mark) {
    while (trail_.size() > mark) {
      slots_[static_cast<std::size_t>(trail_.back())] = nullptr;
      trail_.pop_back();
    }
  }

  void trace(TraceEvent::Kind kind, const TermPtr& goal_rt, int clause_index,
             int clause_ordinal, int source_line, long long depth,
             int pruned = 0) {
    if (!opts_.trace) return;
    TraceEvent e;
    e.kind = kind;
    e.goal = to_string(resolve(goal_rt));
    e.clause_index = clause_index;
    e.clause_ordinal = clause_ordinal;
    e.source_line = source_line;
    e.depth = static_cast<int>(depth);
    e.pruned = pruned;
    opts_.trace->push_back(std::move(e));
  }

  bool solve_seq(const std::vector<TermPtr>& goals, std::size_t i,
                 CutBarrier* cb, long long depth, const Cont& k) {
    if (i == goals.size()) return k();
    return solve_goal(goals[i], cb, depth, [this, &goals, i, cb, depth, &k] {
      return solve_seq(goals, i + 1, cb, depth, k);
    });
  }

  bool solve_goal(const TermPtr& goal, CutBarrier* cb, long long depth,
                  const Cont& k) {
    TermPtr g = deref(goal);
    switch (g->kind) {
      case TermKind::Var:
        throw EngineError("unbound variable used as a goal");
      case TermKind::Int:
      case TermKind::Str:
        throw EngineError("literal used as a goal");
      case TermKind::Atom: {
        const std::string& n = g->text;
        if (n == "true") return k();
        if (n == "fail" || n == "false") return false;
        if (n == "!") {
          cb->cut = true;
          trace(TraceEvent::Kind::Cut, cb->goal_rt ? cb->goal_rt : g,
                cb->cur_index, cb->cur_ordinal, cb->cur_line, depth,
                cb->remaining);
          return k();
        }
        return call_pred(g, cb, depth, k);
      }
      case TermKind::Compound:
        break;
    }
    const std::string& f = g->text;
    std::size_t n = g->args.size();
    if (f == "," && n == 2) {
      return solve_goal(g->args[0], cb, depth, [this, &g, cb, depth, &k] {
        return solve_goal(g->args[1], cb, depth, k);
      });
    }
    if (f == ";" && n == 2) {
      if (solve_goal(g->args[0], cb, depth, k)) return true;
      if (cut_signalled(cb)) return false;
      return solve_goal(g->args[1], cb, depth, k);
    }
    if (f == "\\+" && n == 1) {
      std::size_t tmark = trail_.size();
      std::size_t smark = slots_.size();
      bool found = false;
      CutBarrier nb;  // cut inside the negated goal stays local to it
      solve_goal(g->args[0], &nb, depth + 1, [&found] {
        found = true;
        return true;
      });
      undo_to(tmark);
      slots_.resize(smark);
      return found ? false : k();
    }
    if (f == "=" && n == 2) {
      std::size_t tmark = trail_.size();
      if (unify_rt(g->args[0], g->args[1])) {
        if (k()) return true;
      }
      undo_to(tmark);
      return false;
    }
    if ((f == "==" || f == "\\==") && n == 2) {
      bool eq = term_equal(resolve(g->args[0]), resolve(g->args[1]));
      return eq == (f == "==") ? k() : false;
    }
    if ((f == "=<" || f == "<") && n == 2) {
      TermPtr a = deref(g->args[0]);
      TermPtr b = deref(g->args[1]);
      if (a->kind != TermKind::Int || b->kind != TermKind::Int)
        throw EngineError("comparison requires integers: " + to_string(resolve(g)));
      bool ok = f == "=<" ? a->value <= b->value : a->value < b->value;
      return ok ? k() : false;
    }
    if (f == "member" && n == 2) {
      TermPtr lst = deref(g->args[1]);
      while (lst->kind == TermKind::Compound && lst->text == "." &&
             lst->args.size() == 2) {
        std::size_t tmark = trail_.size();
        if (unify_rt(g->args[0], lst->args[0])) {
          if (k()) return true;
        }
        undo_to(tmark);
        if (cut_signalled(cb)) return false;
        lst = deref(lst->args[1]);
      }
      return false;  // '[]', an unbound tail, or a malformed list ends it
    }
    if (f == "findall" && n == 3) return do_findall(g, cb, depth, k);
    return call_pred(g, cb, depth, k);
  }

  bool do_findall(const TermPtr& g, CutBarrier*, long long depth,
                  const Cont& k) {
    std::size_t tmark = trail_.size();
    std::size_t smark = slots_.size();
    std::vector<TermPtr> snapshots;
    CutBarrier fb;  // fresh scope: cut inside the goal stays inside findall
    solve_goal(g->args[1], &fb, depth + 1, [&] {
      snapshots.push_back(resolve(g->args[0]));
      return false;
    });
    undo_to(tmark);
    slots_.resize(smark);
    // Standard copy semantics: variables left unbound in a collected solution
    // are renamed to fresh ones, independently per solution.
    std::vector<TermPtr> items;
    items.reserve(snapshots.size());
    for (const auto& s : snapshots) {
      std::map<int, int> fresh;
      items.push_back(copy_fresh(s, fresh));
    }
    TermPtr lst = mk_list(items);
    if (unify_rt(g->args[2], lst)) {
      if (k()) return true;
    }
    undo_to(tmark);
    return false;
  }

  TermPtr copy_fresh(const TermPtr& t, std::map<int, int>& fresh) {
    switch (t->kind) {
      case TermKind::Var: {
        auto it = fresh.find(t->var);
        int id;
        if (it == fresh.end()) {
          id = static_cast<int>(slots_.size());
          slots_.push_back(nullptr);
          fresh[t->var] = id;
        } else {
          id = it->second;
        }
        return mk_var(id, t->text);
      }
      case TermKind::Compound: {
        std::vector<TermPtr> args;
        args.reserve(t->args.size());
        for (const auto& a : t->args) args.push_back(copy_fresh(a, fresh));
        return mk_compound(t->text, std::move(args));
      }
      default:
        return t;
    }
  }

  bool call_pred(const TermPtr& g, CutBarrier* cb, long long depth,
                 const Cont& k) {
    const std::string& name = g->text;
    int arity =
        g->kind == TermKind::Compound ? static_cast<int>(g->args.size()) : 0;
    const std::vector<int>* cls = kb_.pred_clauses(name, arity);
    if (!cls) throw UnknownPredicate(name, arity);
    if (depth + 1 > opts_.depth_limit) throw DepthExceeded(opts_.depth_limit);
    trace(TraceEvent::Kind::Call, g, -1, 0, 0, depth);
    CutBarrier local;
    local.parent = cb;
    local.goal_rt = g;
    for (std::size_t ci = 0; ci < cls->size(); ++ci) {
      int gi = (*cls)[ci];
      const Clause& c = kb_.clauses()[static_cast<std::size_t>(gi)];
      std::size_t tmark = trail_.size();
      std::size_t smark = slots_.size();
      int base = static_cast<int>(slots_.size());
      slots_.resize(slots_.size() + static_cast<std::size_t>(c.num_vars));
      local.cur_index = gi;
      local.cur_ordinal = static_cast<int>(ci) + 1;
      local.cur_line = c.source_line;
      local.remaining = static_cast<int>(cls->size() - ci - 1);
      TermPtr head_rt = instantiate(c.head, base);
      if (unify_rt(head_rt, g)) {
        if (depth == 0) {
          top_ordinal_ = static_cast<int>(ci) + 1;
          top_index_ = gi;
        }
        std::vector<TermPtr> body_rt;
        body_rt.reserve(c.body.size());
        for (const auto& b : c.body) body_rt.push_back(instantiate(b, base));
        int ord = static_cast<int>(ci) + 1;
        int line = c.source_line;
        Cont k_exit = [this, g, gi, ord, line, depth, &k]() -> bool {
          trace(TraceEvent::Kind::Exit, g, gi, ord, line, depth);
          bool halt = k();
          if (!halt) trace(TraceEvent::Kind::Redo, g, gi, ord, line, depth);
          return halt;
        };
        if (solve_seq(body_rt, 0, &local, depth + 1, k_exit)) return true;
      }
      undo_to(tmark);
      slots_.resize(smark);
      if (local.cut || cut_signalled(cb)) break;
    }
    trace(TraceEvent::Kind::Fail, g, -1, 0, 0, depth);
    return false;
  }

  const KnowledgeBase& kb_;
  const SolveOptions& opts_;
  std::vector<TermPtr> slots_;
  std::vector<int> trail_;
  int top_ordinal_ = 0;
  int top_index_ = -1;
};

void* search_thread_main(void* arg) {
  (*static_cast<std::function<void()>*>(arg))();
  return nullptr;
}

}  // namespace

Engine::Engine(const KnowledgeBase& kb, SolveOptions opts)
    : kb_(kb), opts_(opts) {}

void Engine::solve(
    const Query& q,
    const std::function<bool(const Solution&)>& on_solution) const {
  std::exception_ptr ep;
  std::function<void()> body = [&] {
    try {
      Search s(kb_, opts_);
      s.run(q, on_solution);
    } catch (...) {
      ep = std::current_exception();
    }
  };
  // A dedicated big-stack thread keeps deep (but within-limit) resolutions
  // from exhausting the host stack; semantics stay fully synchronous.
  pthread_attr_t attr;
  pthread_attr_init(&attr);
  pthread_attr_setstacksize(&attr, 512ull * 1024 * 1024);
  pthread_t th;
  int rc = pthread_create(&th, &attr, &search_thread_main, &body);
  pthread_attr_destroy(&attr);
  if (rc != 0) {
    body();  // no thread available: run here and hope the stack suffices
  } else {
    pthread_join(th, nullptr);
  }
  if (ep) std::rethrow_exception(ep);
}

std::vector<Solution> Engine::solve_all(const Query& q,
                                        std::size_t limit) const {
  std::vector<Solution> out;
  solve(q, [&](const Solution& s) {
    out.push_back(s);
    return out.size() < limit;
  });
  return out;
}

std::vector<Solution> solve(const KnowledgeBase& kb, const Query& q) {
  return Engine(kb).solve_all(q);
}

std::pair<std::vector<Solution>, DeductionTrace> trace_solve(
    const KnowledgeBase& kb, const Query& q) {
  DeductionTrace tr;
  SolveOptions opts;
  opts.trace = &tr;
  Engine eng(kb, opts);
  std::vector<Solution> sols = eng.solve_all(q);
  return {std::move(sols), std::move(tr)};
}

}  // namespace nullcause::logic
