"""Command-line entry point.

Exit codes: 0 success, 1 usage error, 2 data or validation error,
3 internal error.
"""

from __future__ import annotations

import argparse
import logging
import sys
from fractions import Fraction

from .baselines import COMPONENTS, DEFAULT_COMPONENTS, EmptyTrainingError, run_baseline, train_memorizer
from .closure import InconsistentGraphError, close_document
from .corpus_io import CorpusParseError, CorpusValidationError, read_corpus, write_corpus
from .metrics import ClosureMode, MatchMode, ScoringError
from .model import Corpus, validate_corpus
from .scenarios import SUBTASKS, ScenarioConfig, ScenarioError, emit_report, run_scenario
from .split import SplitError, SplitSpec, split_by_patient
from .synthetic import GeneratorConfig, generate_synthetic

log = logging.getLogger("clintempeval")

EXIT_OK, EXIT_USAGE, EXIT_DATA, EXIT_INTERNAL = 0, 1, 2, 3

DATA_ERRORS = (
    CorpusParseError,
    CorpusValidationError,
    ScoringError,
    InconsistentGraphError,
    SplitError,
    EmptyTrainingError,
    OSError,
)


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _u64(text):
    value = int(text)
    if not 0 <= value < 2**64:
        raise argparse.ArgumentTypeError("seed must fit in an unsigned 64-bit integer")
    return value


def _csv(text):
    return [t for t in text.split(",") if t]


def cmd_score(args):
    try:
        config = ScenarioConfig(
            scenario=args.scenario,
            subtasks=None if args.subtasks is None else tuple(_csv(args.subtasks)),
            match_mode=MatchMode(args.match),
            closure_mode=ClosureMode(args.closure),
        )
    except ScenarioError as exc:
        raise UsageError(str(exc)) from None
    gold = read_corpus(args.gold)
    system = read_corpus(args.system)
    report = run_scenario(config, system, gold)
    for w in report.warnings:
        log.warning(w)
    data = emit_report(report, args.format)
    if args.out:
        with open(args.out, "wb") as fh:
            fh.write(data)
    else:
        sys.stdout.buffer.write(data)
        sys.stdout.flush()
    if args.plot:
        from .plotting import plot_report

        plot_report(report, args.plot)


def cmd_baseline(args):
    components = _csv(args.components)
    bad = [c for c in components if c not in COMPONENTS]
    if bad:
        raise UsageError(f"unknown components {', '.join(bad)}; choose from {', '.join(COMPONENTS)}")
    train = read_corpus(args.train)
    inputs = read_corpus(args.input)
    result = run_baseline(train, inputs, components, case_sensitive=args.case_sensitive)
    write_corpus(result, args.out)
    if args.lexicon:
        lex = train_memorizer(train, case_sensitive=args.case_sensitive)
        with open(args.lexicon, "w", encoding="utf-8") as fh:
            fh.write(lex.dump())


def cmd_split(args):
    try:
        fracs = [Fraction(f) for f in _csv(args.fractions)]
        if len(fracs) != 3:
            raise ValueError("expected three fractions")
        spec = SplitSpec(*fracs, seed=args.seed)
    except (ValueError, ZeroDivisionError) as exc:
        raise UsageError(f"bad --fractions {args.fractions!r}: {exc}") from None
    corpus = read_corpus(args.input)
    folds = split_by_patient(corpus, spec)
    for name, fold in zip(("train", "dev", "test"), folds):
        path = f"{args.out_prefix}.{name}"
        write_corpus(fold, path)
        log.info("%s: %d patients, %d documents -> %s",
                 name, len(fold.patient_ids), len(fold), path)


def cmd_closure(args):
    corpus = read_corpus(args.input)
    docs = []
    for doc in corpus.documents:
        closed, notes = close_document(doc, repair=args.repair)
        for note in notes:
            log.warning(note)
        docs.append(closed)
    write_corpus(Corpus(tuple(docs)), args.out)


def cmd_validate(args):
    corpus = read_corpus(args.input, validate=False)
    violations = validate_corpus(corpus)
    for v in violations:
        print(v)
    if violations:
        print(f"{len(violations)} violation(s) in {len(corpus)} document(s)", file=sys.stderr)
        return EXIT_DATA
    print(f"ok: {len(corpus)} document(s)", file=sys.stderr)
    return EXIT_OK


def cmd_generate(args):
    try:
        config = GeneratorConfig(
            n_patients=args.patients,
            relation_density=args.density,
            unambiguous_surfaces=args.unambiguous,
            seed=args.seed,
        )
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    write_corpus(generate_synthetic(config), args.out)


def build_parser():
    p = _Parser(prog="clintempeval", description="Clinical temporal IE evaluation toolkit")
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("score", help="score a system corpus against gold")
    s.add_argument("--scenario", type=int, choices=(1, 2, 3), required=True)
    s.add_argument("--gold", required=True)
    s.add_argument("--system", required=True)
    s.add_argument("--subtasks", help=f"comma-separated subset of {','.join(SUBTASKS)}")
    s.add_argument("--match", choices=[m.value for m in MatchMode], default="exact")
    s.add_argument("--closure", choices=[c.value for c in ClosureMode], default="both-closed")
    s.add_argument("--format", choices=("tsv", "json"), default="tsv")
    s.add_argument("--out", help="write the report here instead of stdout")
    s.add_argument("--plot", help="also render a bar chart (png, svg or pdf)")
    s.set_defaults(func=cmd_score)

    b = sub.add_parser("baseline", help="run the baseline systems")
    b.add_argument("--train", required=True)
    b.add_argument("--input", required=True)
    b.add_argument("--out", required=True)
    b.add_argument("--components", default=",".join(DEFAULT_COMPONENTS))
    b.add_argument("--case-sensitive", action="store_true")
    b.add_argument("--lexicon", help="dump the memorization lexicon (TSV) here")
    b.set_defaults(func=cmd_baseline)

    sp = sub.add_parser("split", help="patient-level train/dev/test split")
    sp.add_argument("--in", dest="input", required=True)
    sp.add_argument("--seed", type=_u64, required=True)
    sp.add_argument("--fractions", default="1/2,1/4,1/4")
    sp.add_argument("--out-prefix", required=True)
    sp.set_defaults(func=cmd_split)

    c = sub.add_parser("closure", help="write CONTAINS links after transitive closure")
    c.add_argument("--in", dest="input", required=True)
    c.add_argument("--out", required=True)
    c.add_argument("--repair", action="store_true",
                   help="close cyclic graphs on their condensation instead of failing")
    c.set_defaults(func=cmd_closure)

    v = sub.add_parser("validate", help="check a corpus file for structural errors")
    v.add_argument("--in", dest="input", required=True)
    v.set_defaults(func=cmd_validate)

    g = sub.add_parser("generate", help="write a synthetic corpus")
    g.add_argument("--patients", type=int, required=True)
    g.add_argument("--seed", type=_u64, required=True)
    g.add_argument("--unambiguous", action="store_true")
    g.add_argument("--density", type=float, default=0.3)
    g.add_argument("--out", required=True)
    g.set_defaults(func=cmd_generate)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # --help exits 0; argument errors exit EXIT_USAGE via _Parser.error
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    logging.basicConfig(
        level=logging.INFO if args.verbose else logging.WARNING,
        format="%(levelname)s: %(message)s",
    )
    try:
        return args.func(args) or EXIT_OK
    except UsageError as exc:
        print(f"clintempeval: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except DATA_ERRORS as exc:
        print(f"clintempeval: {exc}", file=sys.stderr)
        return EXIT_DATA
    except Exception:
        log.exception("internal error")
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
