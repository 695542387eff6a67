"""One handler per command; each returns a Document."""

import sys
from typing import Dict, List

from tqdm import tqdm

from ..core.bernoulli import (
    bernoulli_exact,
    get_table,
    irregular_indices,
    is_very_regular,
    set_table,
)
from ..core.bernoulli_cache import BernoulliCacheManager, BernoulliTable
from ..core.errors import DomainError
from ..core.exact import primes_up_to
from ..core.genus import (
    BUNDLE_CERTIFICATES,
    CERTIFICATES,
    ahat_number,
    builtin,
    intersection_form,
    ko_ahat,
    load_manifold,
    signature_number,
)
from ..core.ko import ko_group, ko_table, surjectivity_report
from ..core.lattice import (
    IntegralLattice,
    build,
    determinant,
    evaluate,
    represent,
    signature,
)
from ..core.obstruction import SweepReport, a_constant, t_constant
from ..core.series import genus_polynomials
from .formatters import Document, exact_text
from .sweep_worker import SweepWorker

LATTICE_FORMS = {"k3": "k3_form", "h": "hyperbolic", "e8neg": "e8_negative"}

REPORT_T_MAX = 7
REPORT_PRIMES_BELOW = 100
REPORT_GENUS_J = 2
REPORT_KO_MAX = 15


class Session:
    """Per-invocation state: the Bernoulli cache and the worker count."""

    def __init__(self, cache_dir: str, workers: int, sweep_max: int):
        self.cache = BernoulliCacheManager(cache_dir)
        self.workers = workers
        self.sweep_max = sweep_max
        self._stored_max = 0

    def open(self):
        """Install the cached table (or an empty one) for this process."""
        table = self.cache.load() or BernoulliTable()
        self._stored_max = table.max_m
        set_table(table)

    def table(self, max_m: int) -> BernoulliTable:
        table = get_table()
        if table.max_m < max_m:
            table.extend_to(max_m)
        return table

    def close(self):
        """Write the table back if this run extended it."""
        table = get_table()
        if table.max_m > self._stored_max:
            self.cache.save(table)


def _key_value_rows(data: Dict) -> List[tuple]:
    rows = []
    for key, value in data.items():
        if isinstance(value, dict):
            rows += [(f"{key}.{k}", v) for k, v in _key_value_rows(value)]
        elif isinstance(value, list):
            rows.append((key, " ".join(exact_text(v) for v in value)))
        else:
            rows.append((key, "" if value is None else value))
    return rows


def cmd_bernoulli(args, session: Session) -> Document:
    if args.m < 1:
        raise DomainError("index starts at 1")
    session.table(args.m)
    ms = range(1, args.m + 1) if args.upto else [args.m]
    records = [{"m": m, "value": exact_text(bernoulli_exact(m))} for m in ms]
    return Document(
        records if args.upto else records[0],
        ["m", "B_m"],
        [(r["m"], r["value"]) for r in records],
    )


def cmd_tconst(args, session: Session) -> Document:
    t = t_constant(args.m)
    return Document(
        t.to_dict(),
        ["m", "t(m)", "2^(2m-1)-1", "Num(B_m/2m)"],
        [(t.m, t.value, t.factor_power, t.factor_num)],
    )


def cmd_aconst(args, session: Session) -> Document:
    value = a_constant(args.m, args.n)
    return Document(
        {"m": args.m, "n": args.n, "value": str(value)},
        ["m", "n", "A(m,n)"],
        [(args.m, args.n, value)],
    )


def run_sweep(session: Session, m_max: int, strategy: str) -> SweepReport:
    """Run the sweep with a tqdm bar on stderr (hidden when not a terminal)."""
    table = session.table(m_max)
    worker = SweepWorker(m_max, strategy, session.workers, table)
    with tqdm(
        total=max(0, m_max - 1),
        desc="A(m,2)",
        unit="m",
        file=sys.stderr,
        disable=None,
        leave=False,
    ) as bar:
        worker.progress_updated.connect(lambda done, _total: bar.update(done - bar.n))
        return worker.run()


def cmd_sweep(args, session: Session) -> Document:
    m_max = session.sweep_max if args.max is None else args.max
    report = run_sweep(session, m_max, args.strategy)
    return Document(report.to_dict(), ["m", "gcd"], report.csv_rows())


def classify_primes(below: int) -> List[Dict]:
    """Odd primes p < below with their regularity data."""
    records = []
    for p in primes_up_to(below - 1):
        if p == 2:
            continue
        irregular = irregular_indices(p)
        records.append(
            {
                "p": p,
                "regular": not irregular,
                "very_regular": is_very_regular(p),
                "irregular_indices": irregular,
            }
        )
    return records


def cmd_primes(args, session: Session) -> Document:
    if args.below < 3:
        raise DomainError("bound must be at least 3")
    records = classify_primes(args.below)
    if args.very_regular:
        records = [r for r in records if r["very_regular"]]
    return Document(
        {"below": args.below, "primes": records},
        ["p", "regular", "very_regular", "irregular_indices"],
        [
            (r["p"], r["regular"], r["very_regular"], " ".join(map(str, r["irregular_indices"])))
            for r in records
        ],
    )


def genus_polynomial_records(max_j: int) -> List[Dict]:
    if max_j < 1:
        raise DomainError("max_j must be positive")
    ahat = genus_polynomials("Ahat", max_j)
    l_class = genus_polynomials("L", max_j)
    return [
        {"j": j, "ahat": a.to_text(), "l": b.to_text()}
        for j, (a, b) in enumerate(zip(ahat, l_class), start=1)
    ]


def certificate_record(name: str) -> Dict:
    """Characteristic numbers, intersection form and bundle check of a built-in."""
    x = builtin(name)
    form = intersection_form(name)
    return {
        "name": x.name,
        "dimension": x.dimension,
        "ahat": exact_text(ahat_number(x)),
        "signature": exact_text(signature_number(x)),
        "ko_ahat": ko_ahat(x).to_text(),
        "intersection_form": {"rank": form.rank, "signature": signature(form)},
        "bundle_certificate": BUNDLE_CERTIFICATES[name]().to_dict(),
    }


def cmd_genus(args, session: Session) -> Document:
    if args.polynomials is not None:
        records = genus_polynomial_records(args.polynomials)
        return Document(
            records, ["j", "Ahat_j", "L_j"], [(r["j"], r["ahat"], r["l"]) for r in records]
        )
    if args.builtin:
        data = certificate_record(args.builtin)
    else:
        x = load_manifold(args.manifold)
        data = {
            "name": x.name,
            "dimension": x.dimension,
            "ahat": exact_text(ahat_number(x)),
            "signature": exact_text(signature_number(x)),
            "ko_ahat": ko_ahat(x).to_text(),
        }
    return Document(data, ["quantity", "value"], _key_value_rows(data))


def _load_gram(path: str) -> IntegralLattice:
    try:
        with open(path, "r", encoding="utf-8") as f:
            return IntegralLattice.from_json(f.read())
    except OSError as e:
        raise DomainError(f"cannot read Gram matrix {path}: {e}") from e


def cmd_lattice(args, session: Session) -> Document:
    form = _load_gram(args.gram) if args.gram else build(LATTICE_FORMS[args.form])
    data = {
        "form": args.form or args.gram,
        "rank": form.rank,
        "even": form.is_even(),
        "determinant": str(determinant(form)),
        "signature": signature(form),
    }
    if args.represent is not None:
        parity = "even_vector" if args.even else "any"
        v = represent(form, args.represent, parity, args.bound)
        data["represent"] = {
            "target": str(args.represent),
            "parity": parity,
            "bound": args.bound,
            "vector": None if v is None else list(v),
            "value": None if v is None else str(evaluate(form, v)),
        }
    rows = _key_value_rows(data)
    data["gram"] = [list(row) for row in form.gram]
    return Document(data, ["quantity", "value"], rows)


REPORT_COLUMNS = [
    "d",
    "k",
    "degree",
    "target",
    "rational",
    "mod2",
    "integral",
    "index_bound",
    "away_from_two",
    "citations",
]


def _report_row(report) -> tuple:
    return (
        report.d,
        report.k,
        report.target.degree,
        report.target.kind,
        report.rational_surjective,
        report.mod2_surjective,
        report.integrally_surjective,
        "" if report.index_bound is None else report.index_bound,
        "" if report.away_from_two_surjective is None else report.away_from_two_surjective,
        " ".join(report.citations),
    )


def cmd_ko(args, session: Session) -> Document:
    columns = ["degree", "kind", "generator"]
    if args.group is not None:
        group = ko_group(args.group)
        return Document(group.to_dict(), columns, [(group.degree, group.kind, group.generator_name)])
    if args.table is not None:
        groups = ko_table(args.table)
        return Document(
            [g.to_dict() for g in groups],
            columns,
            [(g.degree, g.kind, g.generator_name) for g in groups],
        )
    d, k = args.report
    report = surjectivity_report(d, k)
    return Document(report.to_dict(), REPORT_COLUMNS, [_report_row(report)])


def cmd_report(args, session: Session) -> Document:
    """Every computed number behind the surjectivity results in one document."""
    m_max = session.sweep_max if args.max is None else args.max
    primes = classify_primes(REPORT_PRIMES_BELOW)
    sweep = run_sweep(session, m_max, "cross_check")
    data = {
        "t_table": [t_constant(m).to_dict() for m in range(REPORT_T_MAX + 1)],
        "primes": {
            "below": REPORT_PRIMES_BELOW,
            "very_regular": [r["p"] for r in primes if r["very_regular"]],
            "regular_not_very_regular": [
                r["p"] for r in primes if r["regular"] and not r["very_regular"]
            ],
            "irregular": [r["p"] for r in primes if not r["regular"]],
        },
        "genus_polynomials": genus_polynomial_records(REPORT_GENUS_J),
        "certificates": {name: certificate_record(name) for name in CERTIFICATES},
        "ko_table": [g.to_dict() for g in ko_table(REPORT_KO_MAX)],
        "sweep": sweep.to_dict(),
    }
    rows = [(f"t({t['m']})", t["value"]) for t in data["t_table"]]
    rows += [(f"primes.{k}", v) for k, v in _key_value_rows(data["primes"])]
    for record in data["genus_polynomials"]:
        rows.append((f"Ahat_{record['j']}", record["ahat"]))
        rows.append((f"L_{record['j']}", record["l"]))
    for name, record in data["certificates"].items():
        rows += [(f"{name}.{k}", v) for k, v in _key_value_rows(record)]
    rows += [(f"KO_{g['degree']}", g["generator"] or "0") for g in data["ko_table"]]
    rows += [(f"sweep.{k}", v) for k, v in _key_value_rows(data["sweep"])]
    return Document(data, ["quantity", "value"], rows)


COMMANDS = {
    "bernoulli": cmd_bernoulli,
    "tconst": cmd_tconst,
    "aconst": cmd_aconst,
    "sweep": cmd_sweep,
    "primes": cmd_primes,
    "genus": cmd_genus,
    "lattice": cmd_lattice,
    "ko": cmd_ko,
    "report": cmd_report,
}
