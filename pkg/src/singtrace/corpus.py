"""Built-in example spectra and file persistence.

Three generator families go beyond plain data:

* the slowly-decaying counterexample family is a piece *rule* extended
  lazily, so integral-type quantities see the unbounded object while file
  export materializes at most the requested number of pieces;
* the oscillating member and the 1/(1+t) member carry closed-form
  cumulative integrals, since their interesting behaviour lives far beyond
  any materializable grid.
"""

from __future__ import annotations

import csv
import io
import json
import math
from bisect import bisect_left

import numpy as np

from . import summation
from .errors import (DivergenceError, InputError, SchemaError,
                     UnsupportedInputError)
from .rearrange import (NEG_INF, PowerTail, Spectrum, StepFunction,
                        exp_guarded, log_diff_exp)

LN2 = math.log(2.0)

# the leading unit piece plus up to 700 rule pieces
MAX_RULE_PIECES_MATERIALIZED = 701
_RULE_EXTENSION_CAP = 500_000
_COUNTEREXAMPLE_HORIZON_LN = LN2 * 700.0 ** 2


class RuleStepFunction:
    """Non-increasing step data defined by a piece rule, extended on demand.

    ``rule(k)`` returns (log_breakpoint, log_value) of the k-th piece,
    k = 1, 2, ...; breakpoints must increase and values decrease.  Finite
    queries materialize just enough pieces; whole-line integrals extend
    until the terms die out (the rule's analytic abscissa guards the
    divergent cases).
    """

    def __init__(self, rule, n_hint: int, name: str = "",
                 power_abscissa: float = 0.0,
                 suggested_horizon_ln: float | None = None):
        self._rule = rule
        self.n_hint = int(n_hint)
        self.name = name
        self.power_abscissa = power_abscissa
        self.suggested_horizon_ln = suggested_horizon_ln
        self._lbp: list = []
        self._lv: list = []
        self._llen: list = []
        self._prefix: list = [0.0]

    # -- materialization ----------------------------------------------------

    def _ensure(self, n: int):
        while len(self._lbp) < n:
            k = len(self._lbp) + 1
            lbp, lv = self._rule(k)
            prev = self._lbp[-1] if self._lbp else NEG_INF
            if not lbp > prev:
                raise InputError("rule breakpoints must increase")
            llen = log_diff_exp(lbp, prev)
            self._lbp.append(lbp)
            self._lv.append(lv)
            self._llen.append(llen)
            self._prefix.append(self._prefix[-1] + exp_guarded(lv + llen))

    def _ensure_cover_ln(self, ln_t: float):
        self._ensure(self.n_hint)
        while self._lbp[-1] < ln_t:
            if len(self._lbp) >= _RULE_EXTENSION_CAP:
                raise InputError("rule extension cap reached")
            self._ensure(len(self._lbp) + 1)

    def materialize(self, n_pieces: int | None = None) -> StepFunction:
        n = self.n_hint if n_pieces is None else int(n_pieces)
        if n > MAX_RULE_PIECES_MATERIALIZED:
            raise InputError(
                f"at most {MAX_RULE_PIECES_MATERIALIZED} pieces can be "
                "materialized")
        self._ensure(n)
        return StepFunction(tuple(self._lbp[:n]), tuple(self._lv[:n]),
                            0.0, True, self.name)

    # -- analysis protocol ---------------------------------------------------

    def partial_integral_ln(self, ln_t: float) -> float:
        if ln_t == NEG_INF:
            return 0.0
        self._ensure_cover_ln(min(ln_t, self._horizon_cap()))
        j = bisect_left(self._lbp, ln_t)
        if j >= len(self._lbp):
            return self._prefix[-1]
        s = self._prefix[j]
        prev = self._lbp[j - 1] if j > 0 else NEG_INF
        if ln_t > prev and self._lv[j] != NEG_INF:
            s += exp_guarded(self._lv[j] + log_diff_exp(ln_t, prev))
        return s

    def _horizon_cap(self) -> float:
        return math.inf

    def total_integral(self) -> float:
        return math.inf if self.power_abscissa >= 1.0 \
            else self.power_integral(1.0)[0]

    def power_integral(self, s: float):
        """(integral of the function to the power s, error bound)."""
        if s <= self.power_abscissa * (1.0 + 1e-12):
            raise DivergenceError(
                f"power integral diverges for s <= {self.power_abscissa:g}",
                abscissa=self.power_abscissa)
        self._ensure(self.n_hint)
        total = 0.0
        k = 0
        term = math.inf
        prev_term = math.inf
        while True:
            k += 1
            if k > _RULE_EXTENSION_CAP:
                raise DivergenceError("power integral did not settle")
            self._ensure(k)
            prev_term, term = term, exp_guarded(s * self._lv[k - 1]
                                                + self._llen[k - 1])
            total += term
            if k >= self.n_hint and (term == 0.0 or term < prev_term) and \
                    term <= 1e-18 * max(total, 1e-300):
                break
        ratio = term / prev_term if prev_term > 0.0 else 0.0
        err = term * ratio / (1.0 - ratio) if ratio < 1.0 else term
        return total, err

    def exp_integral(self, w: float, q: float):
        """(integral of exp(-w * f(t)**-q) dt, error bound).

        Values decrease along the pieces, so the exponents increase and the
        scan stops at the first underflowing piece.
        """
        total = 0.0
        k = 0
        last = 0.0
        while True:
            k += 1
            if k > _RULE_EXTENSION_CAP:
                raise DivergenceError("heat weight did not settle")
            self._ensure(k)
            lv = self._lv[k - 1]
            e = math.inf if lv == NEG_INF else w * exp_guarded(-q * lv)
            if e > 745.0:
                break
            last = exp_guarded(self._llen[k - 1] - e)
            total += last
        return total, last

    def distribution_at_ln(self, ln_a: float) -> float:
        k = 1
        lam = NEG_INF
        while True:
            if k > _RULE_EXTENSION_CAP:
                raise InputError("rule extension cap reached")
            self._ensure(k)
            if self._lv[k - 1] > ln_a:
                lam = self._lbp[k - 1]
                k += 1
            else:
                break
        return exp_guarded(lam)

    def truncated_trace_ln(self, ln_a: float) -> float:
        k = 0
        while True:
            if k >= _RULE_EXTENSION_CAP:
                raise InputError("rule extension cap reached")
            self._ensure(k + 1)
            if self._lv[k] > ln_a:
                k += 1
            else:
                break
        return self._prefix[k]

    # -- norm support ---------------------------------------------------------

    def mean_candidates(self, psi):
        """Weighted-mean candidates: materialized kinks plus a growth probe."""
        self._ensure(max(self.n_hint, 64))
        kappa = psi.slope_at_zero
        v1 = exp_guarded(self._lv[0])
        if v1 > 0.0:
            yield (math.inf if kappa == 0.0 else v1 / kappa), NEG_INF
        n = len(self._lbp)
        probes = []
        for i in range(n):
            r = self._prefix[i + 1] / psi.value_ln(self._lbp[i])
            probes.append(r)
            yield r, self._lbp[i]
        # extend fourfold to detect growth toward infinity
        self._ensure(min(4 * n, _RULE_EXTENSION_CAP))
        far = [self._prefix[i + 1] / psi.value_ln(self._lbp[i])
               for i in range(n, len(self._lbp))]
        for r, lb in zip(far, self._lbp[n:]):
            yield r, lb
        if far and far[-1] > 1.02 * max(probes):
            tail = far[len(far) // 2:]
            if all(tail[i + 1] >= tail[i] for i in range(len(tail) - 1)):
                yield math.inf, None

    def quasinorm_candidates(self, psi):
        """Per-piece peak values of t f(t)/psi(t), with a growth verdict."""
        self._ensure(max(self.n_hint, 64))
        out = []
        prev = NEG_INF
        n = len(self._lbp)
        self._ensure(min(4 * n, _RULE_EXTENSION_CAP))
        for i in range(len(self._lbp)):
            s, arg = psi.sup_ln_t_over_psi(prev, self._lbp[i])
            prev = self._lbp[i]
            if self._lv[i] == NEG_INF:
                continue
            val = math.inf if s == math.inf \
                else exp_guarded(self._lv[i] + s)
            out.append((val, arg))
        head = [v for v, _ in out[:n]]
        far = [v for v, _ in out[n:]]
        if far and head and far[-1] > 1.02 * max(head):
            tail = far[len(far) // 2:]
            if all(tail[i + 1] >= tail[i] for i in range(len(tail) - 1)):
                out.append((math.inf, None))
        return out

    def witnesses(self, psi, n: int):
        """The first n per-piece quasinorm peaks (diagnostic list)."""
        self._ensure(n)
        out = []
        prev = NEG_INF
        for i in range(n):
            s, _ = psi.sup_ln_t_over_psi(prev, self._lbp[i])
            prev = self._lbp[i]
            out.append(exp_guarded(self._lv[i] + s) if s != math.inf
                       else math.inf)
        return out

    # -- algebra ---------------------------------------------------------------

    def powered(self, p: float) -> "RuleStepFunction":
        if p <= 0.0:
            raise InputError("power must be positive")
        rule = self._rule
        return RuleStepFunction(
            lambda k: (rule(k)[0], p * rule(k)[1]),
            self.n_hint, f"{self.name}^{p:g}" if self.name else "",
            self.power_abscissa / p if self.power_abscissa else 0.0,
            self.suggested_horizon_ln)

    def scaled(self, c: float) -> "RuleStepFunction":
        if c <= 0.0 or not math.isfinite(c):
            raise InputError("scale factor must be positive and finite")
        ln_c = math.log(c)
        rule = self._rule
        return RuleStepFunction(
            lambda k: (rule(k)[0], rule(k)[1] + ln_c),
            self.n_hint, self.name, self.power_abscissa,
            self.suggested_horizon_ln)

    def natural_scale(self) -> float:
        self._ensure(1)
        return exp_guarded(self._lv[0])


class OscillatingSpectrum:
    """mu_n = (2 + sin(ln ln n))/n from n = 3 on (constant before).

    The interesting behaviour needs abscissae around exp(40000); partial
    sums switch from an exact prefix to the closed-form antiderivative
    2 u + (u/2)(sin ln u - cos ln u) of the continuous profile.
    """

    N_EXACT = 1 << 16

    def __init__(self):
        self.name = "oscillating"
        self.suggested_horizon_ln = 45000.0
        self._prefix = None

    def mu(self, n: int) -> float:
        if n < 1:
            raise InputError("index must be >= 1")
        n = max(n, 3)
        return (2.0 + math.sin(math.log(math.log(n)))) / n

    def mu_at_ln(self, ln_t: float) -> float:
        t = exp_guarded(ln_t)
        if t < 3.0:
            return self.mu(3)
        if ln_t > math.log(2.0**53):
            u = ln_t
            return (2.0 + math.sin(math.log(u))) * math.exp(-ln_t)
        return self.mu(int(math.floor(t)) + 1)

    def _exact_prefix(self):
        if self._prefix is None:
            n = np.arange(1, self.N_EXACT + 1, dtype=float)
            mu = (2.0 + np.sin(np.log(np.log(np.maximum(n, 3.0))))) / \
                np.maximum(n, 3.0)
            self._prefix = np.concatenate(([0.0], np.cumsum(mu)))
        return self._prefix

    @staticmethod
    def _antiderivative(u: float) -> float:
        return 2.0 * u + 0.5 * u * (math.sin(math.log(u))
                                    - math.cos(math.log(u)))

    def partial_integral_ln(self, ln_t: float) -> float:
        if ln_t == NEG_INF:
            return 0.0
        prefix = self._exact_prefix()
        if ln_t <= math.log(self.N_EXACT):
            t = math.exp(ln_t)
            m = math.floor(t)
            s = float(prefix[int(m)])
            if t > m:
                s += (t - m) * self.mu(int(m) + 1)
            return s
        m = float(self.N_EXACT)
        f_m = self.mu(self.N_EXACT)
        f_t = self.mu_at_ln(ln_t)
        integral = self._antiderivative(ln_t) - self._antiderivative(math.log(m))
        return float(prefix[-1]) + integral + 0.5 * (f_t - f_m)

    def distribution_at_ln(self, ln_a: float) -> float:
        if self.mu(3) <= exp_guarded(ln_a):
            mu_small = [self.mu(1), self.mu(2)]
            return float(sum(1 for v in mu_small if math.log(v) > ln_a))
        lo, hi = math.log(3.0), 709.0
        # ln mu is strictly decreasing; bisect for the last index above
        for _ in range(200):
            mid = 0.5 * (lo + hi)
            u = mid
            ln_mu = math.log(2.0 + math.sin(math.log(u))) - u
            if ln_mu > ln_a:
                lo = mid
            else:
                hi = mid
        n = math.exp(lo)
        if n < 2.0**53:
            n = math.floor(n)
            while math.log(self.mu(int(n) + 1)) > ln_a:
                n += 1
            while n >= 3 and math.log(self.mu(int(n))) <= ln_a:
                n -= 1
        return float(n)

    def mean_candidates(self, psi):
        kappa = psi.slope_at_zero
        v1 = self.mu(1)
        yield (math.inf if kappa == 0.0 else v1 / kappa), NEG_INF
        for u in np.geomspace(1.1, self.suggested_horizon_ln, 600):
            yield (self.partial_integral_ln(float(u))
                   / psi.value_ln(float(u))), float(u)

    def quasinorm_candidates(self, psi):
        out = []
        prev = NEG_INF
        for u in np.concatenate(([math.log(3.0)],
                                 np.geomspace(2.0, 600.0, 200))):
            s, arg = psi.sup_ln_t_over_psi(prev, float(u))
            mu = self.mu_at_ln(float(u))
            out.append((mu * exp_guarded(s) if s != math.inf else math.inf,
                        arg))
            prev = float(u)
        return out

    def small_ideal_constant(self):
        # n * mu_n = 2 + sin(ln ln n); the oscillation is dense in [-1, 1]
        return 3.0, None

    def natural_scale(self) -> float:
        return self.mu(1)


class SmallIdealCurve:
    """The profile 1/(1+t): partial integrals are exactly ln(1+t)."""

    def __init__(self):
        self.name = "small_ideal"

    @staticmethod
    def _ln1p_exp(u: float) -> float:
        """ln(1 + e^u), written to match the psi1/psi0 evaluators."""
        if u > 0.0:
            return u + math.log1p(math.exp(-u))
        return math.log1p(math.exp(u))

    def mu_at_ln(self, ln_t: float) -> float:
        if ln_t == NEG_INF:
            return 1.0
        if ln_t > 709.0:
            return math.exp(-ln_t)
        return 1.0 / (1.0 + math.exp(ln_t))

    def partial_integral_ln(self, ln_t: float) -> float:
        if ln_t == NEG_INF:
            return 0.0
        return self._ln1p_exp(ln_t)

    def total_integral(self) -> float:
        return math.inf

    def power_integral(self, s: float):
        if s <= 1.0:
            raise DivergenceError("power integral diverges for s <= 1",
                                  abscissa=1.0)
        return 1.0 / (s - 1.0), 0.0

    def exp_integral(self, w: float, q: float):
        v = summation.exp_power_integral(w, q, 1.0)
        return v, 1e-12 * v

    def distribution_at_ln(self, ln_a: float) -> float:
        # 1/(1+t) > a  <=>  t < 1/a - 1
        if ln_a >= 0.0:
            return 0.0
        return math.expm1(-ln_a)

    def truncated_trace_ln(self, ln_a: float) -> float:
        # integral of 1/(1+t) up to the level set boundary 1/a - 1 is -ln a
        if ln_a >= 0.0:
            return 0.0
        return -ln_a

    def small_ideal_constant(self):
        return 1.0, None

    def mean_candidates(self, psi):
        yield 1.0 / psi.slope_at_zero if psi.slope_at_zero > 0.0 \
            else math.inf, NEG_INF
        for u in np.linspace(-40.0, 600.0, 400):
            yield (self.partial_integral_ln(float(u))
                   / psi.value_ln(float(u))), float(u)

    def quasinorm_candidates(self, psi):
        out = []
        kappa = psi.slope_at_zero
        out.append((math.inf if kappa == 0.0 else 1.0 / kappa, NEG_INF))
        prev = -40.0
        for u in np.linspace(-39.0, 600.0, 400):
            s, arg = psi.sup_ln_t_over_psi(prev, float(u))
            out.append((self.mu_at_ln(float(u)) * exp_guarded(s), arg))
            prev = float(u)
        return out

    def natural_scale(self) -> float:
        return 1.0


# ---------------------------------------------------------------------------
# generators
# ---------------------------------------------------------------------------

DEFAULT_HEAD = 64


def _counterexample_rule(k: int):
    if k == 1:
        return 0.0, 0.0
    n = k - 1
    b = (n * n) * LN2
    return b, math.log(n) - b


def gen_spectrum(kind: str, *params, head: int = DEFAULT_HEAD, sort: bool = False):
    """Built-in generators; see the CLI ``gen`` command for the catalog."""
    if kind == "harmonic":
        return gen_spectrum("power", 1.0, head=head)
    if kind == "power":
        if len(params) != 1:
            raise InputError("power needs exactly one parameter p")
        p = float(params[0])
        if not p > 0.0:
            raise InputError("power needs p > 0")
        alpha = 1.0 / p
        n = max(1, int(head))
        vals = tuple(float(k) ** (-alpha) for k in range(1, n + 1))
        return Spectrum(vals, PowerTail(1.0, alpha, n + 1),
                        name="harmonic" if p == 1.0 else f"power({p:g})")
    if kind == "oscillating":
        if params:
            raise InputError("oscillating takes no parameters")
        return OscillatingSpectrum()
    if kind == "small_ideal":
        if params:
            raise InputError("small_ideal takes no parameters")
        return SmallIdealCurve()
    if kind == "counterexample_z":
        n_max = int(params[0]) if params else 30
        _check_n_max(n_max)
        return RuleStepFunction(_counterexample_rule, n_max + 1,
                                f"counterexample_z({n_max})",
                                power_abscissa=1.0,
                                suggested_horizon_ln=_COUNTEREXAMPLE_HORIZON_LN)
    if kind == "counterexample_x":
        if len(params) != 2:
            raise InputError("counterexample_x needs parameters p and n_max")
        p = float(params[0])
        if not p >= 1.0:
            raise InputError("counterexample_x needs p >= 1")
        n_max = int(params[1])
        _check_n_max(n_max)
        z = gen_spectrum("counterexample_z", n_max)
        x = z.powered(1.0 / p)
        x.name = f"counterexample_x(p={p:g}, n_max={n_max})"
        return x
    if kind == "finite":
        if len(params) != 1:
            raise InputError("finite needs one parameter: the value list")
        vals = [float(v) for v in params[0]] if not isinstance(params[0], str) \
            else [float(v) for v in params[0].split(",") if v.strip()]
        if sort:
            vals = sorted(vals, reverse=True)
        return Spectrum(tuple(vals), None, name="finite")
    raise InputError(f"unknown spectrum kind {kind!r}")


def _check_n_max(n_max: int):
    if not 1 <= n_max <= 700:
        raise InputError("n_max must lie in [1, 700]")


def parse_gen_spec(spec: str):
    """Parse 'gen:kind[:param[:param]]' into a generated spectrum."""
    parts = spec.split(":")
    if parts[0] != "gen" or len(parts) < 2:
        raise InputError(f"not a generator spec: {spec!r}")
    return gen_spectrum(parts[1], *parts[2:])


# ---------------------------------------------------------------------------
# persistence
# ---------------------------------------------------------------------------


def _fmt(x: float) -> float:
    return float(format(x, ".17g"))


def spectrum_to_payload(x) -> dict:
    if isinstance(x, Spectrum):
        tail = None
        if x.tail is not None:
            tail = {"coefficient": _fmt(x.tail.coefficient),
                    "exponent": _fmt(x.tail.exponent),
                    "start_index": x.tail.start_index}
        return {"name": x.name, "mu": [_fmt(v) for v in x.head],
                "tail": tail, "metadata": {}}
    if isinstance(x, RuleStepFunction):
        return spectrum_to_payload(x.materialize())
    if isinstance(x, StepFunction):
        payload = {"log_breakpoints": [_fmt(b) for b in x.log_breakpoints],
                   "values": [_fmt(exp_guarded(v)) for v in x.log_values],
                   "beyond_last": _fmt(x.beyond_last)}
        if any(v != NEG_INF and v < -700.0 for v in x.log_values):
            # plain values would underflow; keep the exact logs as well
            payload["log_values"] = [_fmt(v) if v != NEG_INF else None
                                     for v in x.log_values]
        return payload
    raise UnsupportedInputError(f"cannot serialize {type(x).__name__}")


def payload_to_spectrum(payload: dict):
    if not isinstance(payload, dict):
        raise SchemaError("top-level JSON value must be an object")
    if "mu" in payload:
        mu = payload.get("mu")
        if not isinstance(mu, list) or \
                not all(isinstance(v, (int, float)) for v in mu):
            raise SchemaError("'mu' must be a list of numbers")
        tail = payload.get("tail")
        pt = None
        if tail is not None:
            try:
                pt = PowerTail(float(tail["coefficient"]),
                               float(tail["exponent"]),
                               int(tail["start_index"]))
            except (KeyError, TypeError) as exc:
                raise SchemaError(f"bad tail record: {exc}") from exc
        return Spectrum(tuple(float(v) for v in mu), pt,
                        name=str(payload.get("name", "")))
    if "log_breakpoints" in payload:
        lbp = payload.get("log_breakpoints")
        vals = payload.get("values")
        if not isinstance(lbp, list) or not isinstance(vals, list):
            raise SchemaError("'log_breakpoints' and 'values' must be lists")
        if "log_values" in payload:
            lv = tuple(float(v) if v is not None else NEG_INF
                       for v in payload["log_values"])
        else:
            lv = tuple(math.log(v) if v > 0.0 else NEG_INF
                       for v in map(float, vals))
        return StepFunction(tuple(map(float, lbp)), lv,
                            float(payload.get("beyond_last", 0.0)))
    raise SchemaError("expected a spectrum ('mu') or step-function "
                      "('log_breakpoints') record")


def save_spectrum(x, path_or_stream):
    payload = spectrum_to_payload(x)
    text = json.dumps(payload, indent=2)
    if hasattr(path_or_stream, "write"):
        path_or_stream.write(text)
    else:
        with open(path_or_stream, "w", encoding="utf-8") as fh:
            fh.write(text)


def load_spectrum(path_or_stream):
    if hasattr(path_or_stream, "read"):
        text = path_or_stream.read()
    else:
        with open(path_or_stream, "r", encoding="utf-8") as fh:
            text = fh.read()
    stripped = text.lstrip()
    if stripped.startswith("mu") or (stripped and stripped[0].isdigit()):
        return _load_csv(text)
    try:
        payload = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SchemaError(f"not valid JSON: {exc}") from exc
    return payload_to_spectrum(payload)


def _load_csv(text: str) -> Spectrum:
    reader = csv.reader(io.StringIO(text))
    rows = [r for r in reader if r and any(c.strip() for c in r)]
    if not rows or rows[0][0].strip() != "mu":
        raise SchemaError("CSV spectra need a header row 'mu'")
    vals = []
    for i, row in enumerate(rows[1:], start=1):
        try:
            vals.append(float(row[0]))
        except ValueError as exc:
            raise SchemaError(f"bad number at data row {i}") from exc
    return Spectrum(tuple(vals), None)


def save_spectrum_csv(x: Spectrum, path_or_stream):
    if not isinstance(x, Spectrum):
        raise UnsupportedInputError("CSV persists plain spectra only")
    if x.tail is not None:
        raise UnsupportedInputError("CSV cannot express an analytic tail")
    lines = ["mu"] + [format(v, ".17g") for v in x.head]
    text = "\n".join(lines) + "\n"
    if hasattr(path_or_stream, "write"):
        path_or_stream.write(text)
    else:
        with open(path_or_stream, "w", encoding="utf-8") as fh:
            fh.write(text)
