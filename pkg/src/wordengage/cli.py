"""Command-line entry point: ``wordengage <subcommand> [flags]``.

Exit codes: 0 success, 1 input error, 2 degenerate data.
"""

from __future__ import annotations

import argparse
import hashlib
import io
import json
import os
import sys
import warnings

import numpy as np

from . import __version__
from .corpus import (
    Thresholds,
    build_profiles,
    compute_response_rate,
    compute_retweet_rate,
    load_corpus,
    profiles_from_tsv,
    profiles_to_tsv,
)
from .errors import DegenerateDataError, InputError, WordEngageError
from .evaluation import FEATURE_MODES, cross_validate, median_split, reports_to_json, reports_to_tsv
from .lexicon import demo_lexicon_text, parse_lexicon
from .models import fit_gnb, fit_logistic, fit_ols, fit_ridge, fit_svr, model_to_json, standardize_fit
from .stats import TARGETS, correlate_all, correlations_to_tsv, describe, significant_categories, target_values
from .synth import SynthConfig, generate_corpus, reference_planting


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"error: {message}\n")


def _sha256(data):
    return hashlib.sha256(data).hexdigest()


def _read_bytes(path):
    try:
        with open(path, "rb") as fh:
            return fh.read()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from None


def _decode(data, path):
    try:
        return data.decode("utf-8")
    except UnicodeDecodeError:
        raise InputError(f"{path} is not valid UTF-8") from None


class _Inputs:
    """Loaded inputs plus the digests that go into every report header."""

    def __init__(self, args):
        self.args = args
        self.meta = {"tool": f"wordengage {__version__}", "command": args.command}
        if hasattr(args, "seed"):
            self.meta["seed"] = args.seed
        self._lexicon = None

    @property
    def lexicon(self):
        if self._lexicon is None:
            path = getattr(self.args, "lexicon", None)
            if path:
                raw = _read_bytes(path)
                text = _decode(raw, path)
            else:
                text = demo_lexicon_text()
                raw = text.encode("utf-8")
            self.meta["lexicon_sha256"] = _sha256(raw)
            self._lexicon = parse_lexicon(text)
        return self._lexicon

    def records(self):
        path = self.args.corpus
        raw = _read_bytes(path)
        self.meta["corpus_sha256"] = _sha256(raw)
        corpus = load_corpus(io.StringIO(_decode(raw, path)), strict=not self.args.lenient)
        if corpus.skipped:
            _diag("warning", f"skipped {corpus.skipped} malformed line(s): {corpus.skipped_lines[:10]}")
        if not corpus.users:
            raise InputError("empty corpus")
        return corpus.users

    def thresholds(self):
        a = self.args
        return Thresholds(a.min_tweets, a.min_tokens, a.min_questions)

    def profiles(self):
        lexicon = self.lexicon
        if getattr(self.args, "profiles", None):
            raw = _read_bytes(self.args.profiles)
            self.meta["profiles_sha256"] = _sha256(raw)
            profiles = profiles_from_tsv(_decode(raw, self.args.profiles), lexicon)
        else:
            if not self.args.corpus:
                raise InputError("one of --corpus or --profiles is required")
            profiles, excluded = build_profiles(
                self.records(), lexicon, self.thresholds(), threads=self.args.threads
            )
            if any(excluded.values()):
                _diag("info", "excluded users: " + ", ".join(f"{k}={v}" for k, v in excluded.items()))
        if not profiles:
            raise DegenerateDataError("no users passed the activity thresholds")
        return profiles


def _diag(level, message):
    print(f"{level}: {message}", file=sys.stderr)


def _header(meta):
    return "".join(f"# {k}: {v}\n" for k, v in meta.items())


def _emit(args, text):
    if args.output and args.output != "-":
        with open(args.output, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _targets(choice):
    return list(TARGETS) if choice == "both" else [choice]


# -- subcommands -----------------------------------------------------------

def cmd_lexicon_validate(args):
    inputs = _Inputs(args)
    lex = inputs.lexicon
    multi = sum(1 for _, ids in lex.entries if len(ids) > 1)
    wild = sum(1 for p, _ in lex.entries if p.endswith("*"))
    _emit(args, (
        f"ok: {len(lex.categories)} categories, {len(lex.entries)} entries "
        f"({wild} wildcard, {multi} multi-category)\n"
    ))


def cmd_score(args):
    inputs = _Inputs(args)
    profiles = inputs.profiles()
    if args.format == "json":
        lex = inputs.lexicon
        rows = [
            {"user_id": p.user_id, "response_rate": p.response_rate, "retweet_rate": p.retweet_rate,
             "token_count": p.token_count,
             "scores": {lex.name_of(c): p.scores.scores[c] for c in lex.category_ids}}
            for p in profiles
        ]
        _emit(args, json.dumps({"meta": inputs.meta, "profiles": rows}, indent=2) + "\n")
    else:
        _emit(args, _header(inputs.meta) + profiles_to_tsv(profiles, inputs.lexicon))


def cmd_rates(args):
    inputs = _Inputs(args)
    rows = []
    for rec in inputs.records():
        if not rec.timeline:
            _diag("warning", f"user {rec.user_id} has no authored tweets; skipped")
            continue
        rows.append((rec.user_id, compute_response_rate(rec), compute_retweet_rate(rec)))
    summary = {}
    for name, col in (("response_rate", 1), ("retweet_rate", 2)):
        vals = [r[col] for r in rows if r[col] is not None]
        if len(vals) >= 2:
            d = describe(vals)
            summary[name] = {"n": d["n"], "mean": round(d["mean"], 6), "sd": round(d["sd"], 6)}
    if args.format == "json":
        obj = {"meta": inputs.meta, "summary": summary,
               "rates": [{"user_id": u, "response_rate": r, "retweet_rate": t} for u, r, t in rows]}
        _emit(args, json.dumps(obj, indent=2) + "\n")
        return
    lines = [f"# {k}: n={v['n']} mean={v['mean']:.6f} sd={v['sd']:.6f}" for k, v in summary.items()]
    lines.append("user_id\tresponse_rate\tretweet_rate")
    for u, r, t in rows:
        lines.append(f"{u}\t{'' if r is None else f'{r:.6f}'}\t{t:.6f}")
    _emit(args, _header(inputs.meta) + "\n".join(lines) + "\n")


def cmd_correlate(args):
    inputs = _Inputs(args)
    profiles = inputs.profiles()
    reports = {t: correlate_all(profiles, t, inputs.lexicon) for t in _targets(args.target)}
    for t, res in reports.items():
        flat = [c.category_name for c in res if c.zero_variance]
        if flat:
            _diag("warning", f"{t}: zero variance in {', '.join(flat)}")
    if args.format == "json":
        obj = {"meta": inputs.meta, "correlations": {
            t: [{"category": c.category_name, "r": c.r, "p": c.p, "n": c.n, "tier": c.stars,
                 "zero_variance": c.zero_variance} for c in res]
            for t, res in reports.items()
        }}
        _emit(args, json.dumps(obj, indent=2) + "\n")
        return
    blocks = [f"# target: {t}\n" + correlations_to_tsv(res) for t, res in reports.items()]
    _emit(args, _header(inputs.meta) + "\n".join(blocks))


def _hyperparameters(args):
    hyper = {}
    if args.model in ("ols", "ridge") and args.reg_lambda is not None:
        hyper["lambda"] = args.reg_lambda
    if args.model == "svr":
        hyper.update(C=args.svr_c, epsilon=args.svr_epsilon, epochs=args.epochs, seed=args.seed)
    if args.model == "logistic":
        hyper.update(iterations=args.iterations, learning_rate=args.learning_rate, l2=args.l2)
    return hyper


def _default_model(args):
    if args.model is None:
        args.model = "svr" if args.task == "regression" else "logistic"


def cmd_train(args):
    _default_model(args)
    inputs = _Inputs(args)
    profiles = inputs.profiles()
    lex = inputs.lexicon
    usable, y = target_values(profiles, args.target)
    if len(usable) < 3:
        raise DegenerateDataError(f"too few usable profiles for {args.target}")
    ids = lex.category_ids
    if args.features == "significant":
        chosen = significant_categories(correlate_all(usable, args.target, lex))
        if chosen:
            ids = [c for c in ids if c in set(chosen)]
        else:
            _diag("warning", "no significant categories; training on all categories")
    x = np.array([[p.scores.scores[c] for c in ids] for p in usable])
    fm = standardize_fit(x, [lex.name_of(c) for c in ids])
    hyper = _hyperparameters(args)
    if args.task == "regression":
        fitters = {"ols": lambda: fit_ols(fm, y, lam=hyper.get("lambda", 1e-6)),
                   "ridge": lambda: fit_ridge(fm, y, lam=hyper.get("lambda", 1.0)),
                   "svr": lambda: fit_svr(fm, y, **hyper)}
    else:
        labels = median_split(y)
        fitters = {"logistic": lambda: fit_logistic(fm, labels, **hyper),
                   "gnb": lambda: fit_gnb(fm, labels)}
    if args.model not in fitters:
        raise InputError(f"model {args.model!r} does not fit task {args.task!r}")
    model = fitters[args.model]()
    obj = json.loads(model_to_json(model))
    obj["meta"] = {**inputs.meta, "target": args.target, "task": args.task, "features": args.features}
    _emit(args, json.dumps(obj, indent=2) + "\n")


def cmd_cv(args):
    _default_model(args)
    inputs = _Inputs(args)
    profiles = inputs.profiles()
    modes = list(FEATURE_MODES) if args.features == "both" else [args.features]
    scope = args.selection.replace("-", "_")
    reports = []
    for mode in modes:
        for target in _targets(args.target):
            reports.append(cross_validate(
                profiles, inputs.lexicon, target, task=args.task, model_kind=args.model,
                feature_mode=mode, selection_scope=scope, seed=args.seed,
                hyperparameters=_hyperparameters(args), k=args.folds, threads=args.threads,
            ))
    for r in reports:
        if r.fallback_folds:
            _diag("warning", f"{r.target}/{r.feature_mode}: no significant categories in folds "
                             f"{r.fallback_folds}; used all categories there")
    if args.format == "json":
        _emit(args, reports_to_json(reports, inputs.meta))
    else:
        meta = {**inputs.meta, "task": args.task, "model": args.model, "folds": args.folds,
                "selection": scope}
        _emit(args, _header(meta) + reports_to_tsv(reports))


def _parse_planted(specs):
    planted = []
    for spec in specs:
        parts = spec.split(":")
        if len(parts) != 3:
            raise InputError(f"--plant expects NAME:R_RESPONSE:R_RETWEET, got {spec!r}")
        try:
            planted.append((parts[0], float(parts[1]), float(parts[2])))
        except ValueError:
            raise InputError(f"--plant correlations must be numbers: {spec!r}") from None
    return tuple(planted)


def cmd_synth(args):
    inputs = _Inputs(args)
    if args.planting == "reference":
        planted = reference_planting()
    else:
        planted = ()
    if args.plant:
        extra = _parse_planted(args.plant)
        names = {p[0] for p in extra}
        planted = tuple(p for p in planted if p[0] not in names) + extra
    cfg = SynthConfig(
        n_users=args.users, tweets_per_user=args.tweets_per_user, planted=planted,
        base_usage=args.base_usage, noise_sd=args.noise_sd,
        mean_response_rate=args.response_mean, sd_response_rate=args.response_sd,
        mean_retweet_rate=args.retweet_mean, sd_retweet_rate=args.retweet_sd,
        questions_per_user=args.questions, calibration=args.calibration, seed=args.seed,
    )
    corpus = generate_corpus(cfg, inputs.lexicon)
    corpus.manifest["meta"] = {**inputs.meta}
    os.makedirs(args.out_dir, exist_ok=True)
    corpus.write(os.path.join(args.out_dir, "corpus.jsonl"), os.path.join(args.out_dir, "manifest.json"))
    _diag("info", f"wrote {len(corpus.lines)} tweets for {cfg.n_users} users to {args.out_dir}")


# -- parser ----------------------------------------------------------------

def build_parser():
    parser = _Parser(prog="wordengage", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"wordengage {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(p, corpus=True, profiles=False):
        p.add_argument("--lexicon", help="LIWC-format .dic file (default: bundled demo lexicon)")
        p.add_argument("--output", "-o", default="-", help="output file (default: stdout)")
        p.add_argument("--format", choices=("tsv", "json"), default="tsv")
        p.add_argument("--threads", type=int, default=1)
        p.add_argument("--seed", type=int, default=0)
        if corpus:
            p.add_argument("--corpus", required=not profiles, help="JSONL tweet corpus")
            p.add_argument("--lenient", action="store_true", help="skip malformed lines instead of failing")
            p.add_argument("--min-tweets", type=int, default=10)
            p.add_argument("--min-tokens", type=int, default=25)
            p.add_argument("--min-questions", type=int, default=1)
        if profiles:
            p.add_argument("--profiles", help="profile TSV written by 'score' (instead of --corpus)")

    def modelling(p, both):
        if both:
            p.add_argument("--target", choices=TARGETS + ("both",), default="both")
        else:
            p.add_argument("--target", choices=TARGETS, default="response")
        p.add_argument("--task", choices=("regression", "classification"), default="regression")
        p.add_argument("--model", choices=("ols", "ridge", "svr", "logistic", "gnb"))
        p.add_argument("--lambda", dest="reg_lambda", type=float)
        p.add_argument("--svr-c", type=float, default=1.0)
        p.add_argument("--svr-epsilon", type=float, default=0.01)
        p.add_argument("--epochs", type=int, default=200)
        p.add_argument("--iterations", type=int, default=300)
        p.add_argument("--learning-rate", type=float, default=1.0)
        p.add_argument("--l2", type=float, default=1e-4)

    p = sub.add_parser("lexicon-validate", help="check a .dic file")
    common(p, corpus=False)
    p.set_defaults(func=cmd_lexicon_validate)

    p = sub.add_parser("score", help="per-user category scores and rates")
    common(p)
    p.set_defaults(func=cmd_score)

    p = sub.add_parser("rates", help="per-user response and retweet rates")
    common(p)
    p.set_defaults(func=cmd_rates)

    p = sub.add_parser("correlate", help="category/engagement correlation tables")
    common(p, profiles=True)
    p.add_argument("--target", choices=TARGETS + ("both",), default="both")
    p.set_defaults(func=cmd_correlate)

    p = sub.add_parser("train", help="fit one model and write it as JSON")
    common(p, profiles=True)
    modelling(p, both=False)
    p.add_argument("--features", choices=FEATURE_MODES, default="all")
    p.set_defaults(func=cmd_train)

    p = sub.add_parser("cv", help="k-fold cross-validated MAE or AUC")
    common(p, profiles=True)
    modelling(p, both=True)
    p.add_argument("--features", choices=FEATURE_MODES + ("both",), default="both")
    p.add_argument("--selection", choices=("per-fold", "global"), default="per-fold")
    p.add_argument("--folds", type=int, default=10)
    p.set_defaults(func=cmd_cv)

    p = sub.add_parser("synth", help="generate a synthetic corpus with planted correlations")
    p.add_argument("--lexicon")
    p.add_argument("--out-dir", required=True)
    p.add_argument("--users", type=int, default=1000)
    p.add_argument("--tweets-per-user", type=int, default=200)
    p.add_argument("--questions", type=int, default=10)
    p.add_argument("--planting", choices=("reference", "none"), default="reference",
                   help="built-in planted correlations or none")
    p.add_argument("--plant", action="append", metavar="NAME:R_RESP:R_RT",
                   help="plant (or override) one category; repeatable")
    p.add_argument("--base-usage", type=float, default=0.03)
    p.add_argument("--noise-sd", type=float, default=0.2)
    p.add_argument("--response-mean", type=float, default=0.754)
    p.add_argument("--response-sd", type=float, default=0.097)
    p.add_argument("--retweet-mean", type=float, default=0.117)
    p.add_argument("--retweet-sd", type=float, default=0.15)
    p.add_argument("--calibration", choices=("sample", "population"), default="sample")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--threads", type=int, default=1)
    p.set_defaults(func=cmd_synth)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        with warnings.catch_warnings(record=True) as caught:
            warnings.simplefilter("always")
            args.func(args)
        for w in caught:
            _diag("warning", str(w.message))
    except DegenerateDataError as exc:
        _diag("error", str(exc))
        return 2
    except (InputError, WordEngageError) as exc:
        _diag("error", str(exc))
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
