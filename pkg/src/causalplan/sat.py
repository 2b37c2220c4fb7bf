"""Embedded CDCL SAT solver plus DIMACS exchange.

Conflict-driven clause learning with two-literal watching, first-UIP
learning with local minimization, activity-driven branching, saved
phases, and Luby restarts.  The search is deterministic for a fixed
seed (default 0); wall-clock time never influences a decision unless a
time limit is set.  Every SAT answer is verified against the clause set
before it is returned.

Clauses can be added between solve() calls (blocking clauses for model
enumeration, cost rejections), which keeps learned clauses alive.
"""

from __future__ import annotations

import random
import time
from dataclasses import dataclass, field


class ResourceLimit(Exception):
    """Raised when a conflict or time budget runs out; distinct from UNSAT."""

    def __init__(self, stats: "Stats"):
        self.stats = stats
        super().__init__(f"solver limit reached after {stats.conflicts} conflicts")


class DimacsError(Exception):
    pass


@dataclass
class Stats:
    decisions: int = 0
    propagations: int = 0
    conflicts: int = 0
    restarts: int = 0
    elapsed: float = 0.0


@dataclass
class SolveResult:
    status: str  # "SAT" | "UNSAT"
    model: tuple[bool, ...] | None = None  # index 0 unused
    stats: Stats = field(default_factory=Stats)

    @property
    def is_sat(self) -> bool:
        return self.status == "SAT"


def _luby(i: int) -> int:
    """Luby restart sequence 1,1,2,1,1,2,4,... (1-based)."""
    while True:
        k = i.bit_length()
        if i == (1 << k) - 1:
            return 1 << (k - 1)
        i -= (1 << (k - 1)) - 1


class Solver:
    """CDCL over variables 1..n_vars.  Literals are nonzero ints."""

    RESTART_BASE = 128
    VAR_DECAY = 0.95
    RANDOM_FREQ = 0.02

    def __init__(self, n_vars: int, clauses, seed: int = 0):
        self.nvars = n_vars
        self.ok = True
        self.clauses: list[list[int]] = []
        self.n_problem_clauses = 0
        self.watches: list[list[int]] = [[] for _ in range(2 * n_vars + 2)]
        self.assign = [0] * (n_vars + 1)  # 0 unassigned, 1 true, -1 false
        self.level = [0] * (n_vars + 1)
        self.reason = [-1] * (n_vars + 1)
        self.saved = [-1] * (n_vars + 1)  # phase saving, prefer false
        self.activity = [0.0] * (n_vars + 1)
        self.var_inc = 1.0
        self.trail: list[int] = []
        self.trail_lim: list[int] = []
        self.qhead = 0
        self.rng = random.Random(seed)
        self.stats = Stats()
        import heapq

        self.heapq = heapq
        self.order = [(0.0, v) for v in range(1, n_vars + 1)]
        for c in clauses:
            self.add_clause(c)
        self.n_problem_clauses = len(self.clauses)

    # --- assignment plumbing ---

    def _value(self, lit: int) -> int:
        a = self.assign[lit if lit > 0 else -lit]
        return a if lit > 0 else -a

    @staticmethod
    def _widx(lit: int) -> int:
        return (lit << 1) if lit > 0 else ((-lit) << 1) | 1

    def _enqueue(self, lit: int, reason: int = -1) -> None:
        v = lit if lit > 0 else -lit
        self.assign[v] = 1 if lit > 0 else -1
        self.level[v] = len(self.trail_lim)
        self.reason[v] = reason
        self.trail.append(lit)

    def _push_order(self, v: int) -> None:
        self.heapq.heappush(self.order, (-self.activity[v], v))

    def _bump(self, v: int) -> None:
        self.activity[v] += self.var_inc
        if self.activity[v] > 1e100:
            for i in range(1, self.nvars + 1):
                self.activity[i] *= 1e-100
            self.var_inc *= 1e-100
        self._push_order(v)

    def _backtrack(self, target: int) -> None:
        if len(self.trail_lim) <= target:
            return
        limit = self.trail_lim[target]
        for i in range(len(self.trail) - 1, limit - 1, -1):
            lit = self.trail[i]
            v = lit if lit > 0 else -lit
            self.saved[v] = 1 if lit > 0 else -1
            self.assign[v] = 0
            self.reason[v] = -1
            self._push_order(v)
        del self.trail[limit:]
        del self.trail_lim[target:]
        self.qhead = len(self.trail)

    # --- clause management ---

    def add_clause(self, lits) -> bool:
        """Add a clause at decision level 0; returns False if it makes the
        formula trivially unsatisfiable."""
        if not self.ok:
            return False
        self._backtrack(0)
        c: list[int] = []
        lits = list(lits)
        for l in dict.fromkeys(lits):
            if not (1 <= abs(l) <= self.nvars):
                raise ValueError(f"literal {l} out of range for {self.nvars} variables")
            if -l in lits:
                return True  # tautology
            val = self._value(l)
            if val == 1:
                return True  # already satisfied forever
            if val == 0:
                c.append(l)
        if not c:
            self.ok = False
            return False
        if len(c) == 1:
            self._enqueue(c[0])
            if self._propagate() != -1:
                self.ok = False
                return False
            return True
        ci = len(self.clauses)
        self.clauses.append(c)
        self.watches[self._widx(c[0])].append(ci)
        self.watches[self._widx(c[1])].append(ci)
        return True

    def _attach_learnt(self, c: list[int]) -> int:
        ci = len(self.clauses)
        self.clauses.append(c)
        self.watches[self._widx(c[0])].append(ci)
        self.watches[self._widx(c[1])].append(ci)
        return ci

    # --- search ---

    def _propagate(self) -> int:
        """Unit propagation; returns a conflicting clause index or -1."""
        clauses = self.clauses
        watches = self.watches
        assign = self.assign
        while self.qhead < len(self.trail):
            p = self.trail[self.qhead]
            self.qhead += 1
            self.stats.propagations += 1
            neg = -p
            widx = self._widx(neg)
            ws = watches[widx]
            keep: list[int] = []
            i = 0
            n = len(ws)
            while i < n:
                ci = ws[i]
                i += 1
                c = clauses[ci]
                if c[0] == neg:
                    c[0], c[1] = c[1], c[0]
                w0 = c[0]
                a0 = assign[w0 if w0 > 0 else -w0]
                if (a0 if w0 > 0 else -a0) == 1:
                    keep.append(ci)
                    continue
                moved = False
                for k in range(2, len(c)):
                    lk = c[k]
                    ak = assign[lk if lk > 0 else -lk]
                    if (ak if lk > 0 else -ak) != -1:
                        c[1], c[k] = lk, neg
                        watches[self._widx(lk)].append(ci)
                        moved = True
                        break
                if moved:
                    continue
                keep.append(ci)
                if (a0 if w0 > 0 else -a0) == -1:
                    keep.extend(ws[i:])
                    watches[widx] = keep
                    self.qhead = len(self.trail)
                    return ci
                self._enqueue(w0, ci)
            watches[widx] = keep
        return -1

    def _analyze(self, confl: int) -> tuple[list[int], int]:
        seen = bytearray(self.nvars + 1)
        learnt: list[int] = [0]
        path = 0
        p = 0
        idx = len(self.trail)
        cur_level = len(self.trail_lim)
        while True:
            for q in self.clauses[confl]:
                if q == p:
                    continue
                v = q if q > 0 else -q
                if not seen[v] and self.level[v] > 0:
                    seen[v] = 1
                    self._bump(v)
                    if self.level[v] >= cur_level:
                        path += 1
                    else:
                        learnt.append(q)
            while True:
                idx -= 1
                p = self.trail[idx]
                if seen[p if p > 0 else -p]:
                    break
            v = p if p > 0 else -p
            path -= 1
            if path == 0:
                break
            confl = self.reason[v]
            seen[v] = 0
        learnt[0] = -p

        # local minimization: drop literals implied by the rest
        def redundant(q: int) -> bool:
            v = q if q > 0 else -q
            r = self.reason[v]
            if r < 0:
                return False
            return all(seen[x if x > 0 else -x] or self.level[x if x > 0 else -x] == 0
                       for x in self.clauses[r] if x != -q)

        learnt = [learnt[0]] + [q for q in learnt[1:] if not redundant(q)]

        if len(learnt) == 1:
            return learnt, 0
        # move a max-level literal into the second watch slot
        mi = max(range(1, len(learnt)),
                 key=lambda i: self.level[learnt[i] if learnt[i] > 0 else -learnt[i]])
        learnt[1], learnt[mi] = learnt[mi], learnt[1]
        bt = self.level[learnt[1] if learnt[1] > 0 else -learnt[1]]
        return learnt, bt

    def _pick_branch(self) -> int:
        if self.nvars and self.rng.random() < self.RANDOM_FREQ:
            start = self.rng.randrange(1, self.nvars + 1)
            for off in range(self.nvars):
                v = (start + off - 1) % self.nvars + 1
                if self.assign[v] == 0:
                    return self.saved[v] * v
        heap = self.order
        pop = self.heapq.heappop
        while heap:
            _, v = pop(heap)
            if self.assign[v] == 0:
                return self.saved[v] * v
        return 0

    def solve(self, assumptions=(), *, max_conflicts: int | None = None,
              max_seconds: float | None = None) -> SolveResult:
        t0 = time.perf_counter()
        deadline = t0 + max_seconds if max_seconds is not None else None

        def done(status: str, model=None) -> SolveResult:
            self.stats.elapsed += time.perf_counter() - t0
            return SolveResult(status, model, self.stats)

        if not self.ok:
            return done("UNSAT")
        self._backtrack(0)
        if self._propagate() != -1:
            self.ok = False
            return done("UNSAT")

        assumptions = list(assumptions)
        conflicts_here = 0
        restart_n = 1
        restart_limit = self.RESTART_BASE * _luby(1)

        while True:
            confl = self._propagate()
            if confl != -1:
                self.stats.conflicts += 1
                conflicts_here += 1
                if len(self.trail_lim) == 0:
                    self.ok = False
                    return done("UNSAT")
                learnt, bt = self._analyze(confl)
                self._backtrack(bt)
                if len(learnt) == 1:
                    self._enqueue(learnt[0])
                else:
                    ci = self._attach_learnt(learnt)
                    self._enqueue(learnt[0], ci)
                self.var_inc /= self.VAR_DECAY
                if max_conflicts is not None and conflicts_here >= max_conflicts:
                    self.stats.elapsed += time.perf_counter() - t0
                    raise ResourceLimit(self.stats)
                if deadline is not None and self.stats.conflicts % 256 == 0 \
                        and time.perf_counter() > deadline:
                    self.stats.elapsed += time.perf_counter() - t0
                    raise ResourceLimit(self.stats)
                if conflicts_here >= restart_limit:
                    restart_n += 1
                    restart_limit = conflicts_here + self.RESTART_BASE * _luby(restart_n)
                    self.stats.restarts += 1
                    self._backtrack(0)
                continue

            if len(self.trail_lim) < len(assumptions):
                lit = assumptions[len(self.trail_lim)]
                if not (1 <= abs(lit) <= self.nvars):
                    raise ValueError(f"assumption literal {lit} out of range")
                val = self._value(lit)
                if val == -1:
                    return done("UNSAT")
                self.trail_lim.append(len(self.trail))
                if val == 0:
                    self._enqueue(lit)
                continue

            lit = self._pick_branch()
            if lit == 0:
                model = tuple(a == 1 for a in self.assign)
                self._verify(model)
                return done("SAT", model)
            self.stats.decisions += 1
            self.trail_lim.append(len(self.trail))
            self._enqueue(lit)

    def _verify(self, model: tuple[bool, ...]) -> None:
        for c in self.clauses[: self.n_problem_clauses]:
            if not any(model[l] if l > 0 else not model[-l] for l in c):
                raise AssertionError(f"internal error: model does not satisfy {c}")


def _as_pair(cnf) -> tuple[int, list]:
    if isinstance(cnf, tuple):
        return cnf
    return cnf.var_count, cnf.clauses


def solve(cnf, assumptions=(), *, seed: int = 0, max_conflicts: int | None = None,
          max_seconds: float | None = None) -> SolveResult:
    """One-shot solve.  cnf is a compiler.CnfFormula or (n_vars, clauses)."""
    n, clauses = _as_pair(cnf)
    return Solver(n, clauses, seed=seed).solve(
        assumptions, max_conflicts=max_conflicts, max_seconds=max_seconds)


def enumerate_models(cnf, project_vars, *, seed: int = 0, limit: int | None = None):
    """All satisfying assignments projected onto project_vars, via repeated
    solving with blocking clauses.  Returns a list of bool tuples aligned
    with project_vars (deduplicated by construction)."""
    n, clauses = _as_pair(cnf)
    solver = Solver(n, clauses, seed=seed)
    out: list[tuple[bool, ...]] = []
    while limit is None or len(out) < limit:
        res = solver.solve()
        if not res.is_sat:
            break
        proj = tuple(res.model[v] for v in project_vars)
        out.append(proj)
        blocking = [-v if res.model[v] else v for v in project_vars]
        if not solver.add_clause(blocking):
            break
    return out


# --- DIMACS ------------------------------------------------------------------

def emit_dimacs(cnf) -> str:
    """Serialize to DIMACS CNF.  Atom-table comments come first so external
    tooling can map variables back to timed atoms; definition variables are
    marked as aux."""
    lines = []
    atoms = getattr(cnf, "atoms", ())
    for i, ta in enumerate(atoms):
        lines.append(f"c atom {i + 1} {ta}")
    n, clauses = _as_pair(cnf)
    for v in range(len(atoms) + 1, n + 1):
        lines.append(f"c aux {v}")
    lines.append(f"p cnf {n} {len(clauses)}")
    for c in clauses:
        lines.append(" ".join(map(str, c)) + " 0")
    return "\n".join(lines) + "\n"


def parse_dimacs(text: str) -> tuple[int, list[tuple[int, ...]]]:
    """Read a DIMACS CNF file back into (n_vars, clauses)."""
    n_vars = None
    clauses: list[tuple[int, ...]] = []
    cur: list[int] = []
    for ln, line in enumerate(text.splitlines(), 1):
        line = line.strip()
        if not line or line.startswith("c"):
            continue
        if line.startswith("p"):
            parts = line.split()
            if len(parts) != 4 or parts[1] != "cnf":
                raise DimacsError(f"line {ln}: malformed problem line {line!r}")
            n_vars = int(parts[2])
            continue
        for tok in line.split():
            try:
                l = int(tok)
            except ValueError:
                raise DimacsError(f"line {ln}: bad literal {tok!r}") from None
            if l == 0:
                clauses.append(tuple(cur))
                cur = []
            else:
                if n_vars is None:
                    raise DimacsError(f"line {ln}: clause before 'p cnf' header")
                if abs(l) > n_vars:
                    raise DimacsError(f"line {ln}: literal {l} out of range 1..{n_vars}")
                cur.append(l)
    if n_vars is None:
        raise DimacsError("missing 'p cnf' header")
    if cur:
        clauses.append(tuple(cur))
    return n_vars, clauses


def read_dimacs_model(text: str, cnf) -> SolveResult:
    """Parse an external solver's output and verify any model against cnf.

    Accepts the competition format ('s SATISFIABLE' + 'v' lines) and the
    bare format ('SAT' on the first line followed by literals, or literals
    only).  Variables missing from the model default to false; a model that
    fails verification raises DimacsError.
    """
    n, clauses = _as_pair(cnf)
    status: str | None = None
    lits: list[int] = []
    for line in text.splitlines():
        line = line.strip()
        if not line or line.startswith("c"):
            continue
        head = line.split()[0]
        if head == "s" or head.upper() in ("SAT", "SATISFIABLE", "UNSAT", "UNSATISFIABLE"):
            word = line.split()[1] if head == "s" and len(line.split()) > 1 else head
            word = word.upper()
            if word in ("SAT", "SATISFIABLE"):
                status = "SAT"
            elif word in ("UNSAT", "UNSATISFIABLE"):
                status = "UNSAT"
            else:
                raise DimacsError(f"unrecognized status line {line!r}")
            continue
        body = line[2:] if line.startswith("v ") or line.startswith("v\t") else line
        for tok in body.split():
            try:
                l = int(tok)
            except ValueError:
                raise DimacsError(f"bad literal {tok!r} in solver output") from None
            if l != 0:
                lits.append(l)
    if status is None:
        if not lits:
            raise DimacsError("no status line and no literals in solver output")
        status = "SAT"
    if status == "UNSAT":
        return SolveResult("UNSAT")
    model = [False] * (n + 1)
    for l in lits:
        v = abs(l)
        if v > n:
            raise DimacsError(f"literal {l} exceeds variable count {n}")
        model[v] = l > 0
    model_t = tuple(model)
    for c in clauses:
        if not any(model_t[l] if l > 0 else not model_t[-l] for l in c):
            raise DimacsError(f"reported model does not satisfy clause {tuple(c)}")
    return SolveResult("SAT", model_t)
