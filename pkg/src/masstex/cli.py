"""Batch command-line front end for the mass-classification pipeline.

Subcommands cover the full flow: ``features`` (annotations + PGM images ->
feature CSV), ``split``, ``train``, ``predict``, ``eval``, ``gradcheck``
and ``synth``. Every run prints its fully resolved configuration before
doing anything, runs are idempotent for fixed inputs and seeds, and the
train/eval reports get a PNG figure written next to the CSV.

Exit codes: 0 success, 1 usage error, 2 data error (or a failed check).
"""

import argparse
import csv
import sys
from pathlib import Path

from . import evaluation, features, mlp, pgm, roi, testkit, training

PREDICTION_CSV_HEADER = ("id", "score", "predicted", "label")

_DATA_ERRORS = (
    pgm.PgmError,
    roi.AnnotationError,
    roi.CropError,
    features.FeatureCsvError,
    training.UnlabeledRecord,
    training.ClassMissing,
    training.NonFiniteLoss,
    mlp.EmptySampleSet,
    mlp.DimensionMismatch,
    evaluation.LengthMismatch,
    evaluation.EmptyInput,
    ValueError,
    OSError,
)


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _UsageError(f"{message}\n{self.format_usage()}")


def _bool_flag(text: str) -> bool:
    lowered = text.lower()
    if lowered in ("true", "1", "yes", "on"):
        return True
    if lowered in ("false", "0", "no", "off"):
        return False
    raise argparse.ArgumentTypeError(f"expected a boolean, got {text!r}")


def build_parser() -> _Parser:
    parser = _Parser(prog="masstex", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")

    p = sub.add_parser("features", help="extract texture features for annotated masses")
    p.add_argument("--annotations", required=True, help="MIAS-style annotation file")
    p.add_argument("--images", required=True, help="directory holding <id>.pgm images")
    p.add_argument("--mask", choices=("circle", "square"), default="circle")
    p.add_argument("--y-origin", choices=("top", "bottom"), default="bottom")
    p.add_argument("--lenient", action="store_true",
                   help="report bad annotation lines / missing images as warnings, not failures")
    p.add_argument("--out", required=True, help="output feature CSV")
    p.set_defaults(func=cmd_features)

    p = sub.add_parser("split", help="partition a feature CSV into train/test parts")
    p.add_argument("input", help="feature CSV")
    p.add_argument("--train-fraction", type=float, default=0.25)
    p.add_argument("--stratified", type=_bool_flag, default=True, metavar="BOOL")
    p.add_argument("--seed", type=int, default=42)
    p.add_argument("--out", required=True,
                   help="output stem; writes <stem>_train.csv and <stem>_test.csv")
    p.set_defaults(func=cmd_split)

    p = sub.add_parser("train", help="fit the classifier on a labeled feature CSV")
    p.add_argument("input", help="labeled feature CSV")
    p.add_argument("--lr", type=float, default=0.1)
    p.add_argument("--max-epochs", type=int, default=10000)
    p.add_argument("--target-mse", type=float, default=0.01)
    p.add_argument("--seed", type=int, default=42)
    p.add_argument("--init-range", type=float, default=0.5)
    p.add_argument("--update", choices=("per-sample", "batch"), default="per-sample")
    p.add_argument("--bias", type=_bool_flag, default=True, metavar="BOOL")
    p.add_argument("--paper-faithful", action="store_true",
                   help="bias off, fixed 7-5-1 topology (40 trainable weights)")
    p.add_argument("--model", required=True, help="output model file")
    p.add_argument("--out", required=True, help="output training report CSV (+ PNG)")
    p.set_defaults(func=cmd_train)

    p = sub.add_parser("predict", help="score a feature CSV with a trained model")
    p.add_argument("input", help="feature CSV")
    p.add_argument("--model", required=True, help="model file")
    p.add_argument("--threshold", type=float, default=evaluation.DEFAULT_THRESHOLD)
    p.add_argument("--out", required=True, help="output prediction CSV")
    p.set_defaults(func=cmd_predict)

    p = sub.add_parser("eval", help="confusion-matrix metrics for a prediction CSV")
    p.add_argument("input", help="prediction CSV with truth labels")
    p.add_argument("--threshold", type=float, default=evaluation.DEFAULT_THRESHOLD)
    p.add_argument("--out", required=True, help="output metrics report CSV (+ PNG)")
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("gradcheck", help="compare backprop against central differences")
    p.add_argument("--seed", type=int, default=42)
    p.add_argument("--cases", type=int, default=100)
    p.add_argument("--step", type=float, default=1e-5)
    p.set_defaults(func=cmd_gradcheck)

    p = sub.add_parser("synth", help="emit the synthetic two-cluster feature CSV")
    p.add_argument("--seed", type=int, default=testkit.DEFAULT_SYNTH_SEED)
    p.add_argument("--n-per-class", type=int, default=testkit.DEFAULT_N_PER_CLASS)
    p.add_argument("--spread", type=float, default=testkit.DEFAULT_SPREAD)
    p.add_argument("--out", required=True, help="output feature CSV")
    p.set_defaults(func=cmd_synth)

    return parser


def _print_config(args: argparse.Namespace) -> None:
    pairs = [(k, v) for k, v in sorted(vars(args).items()) if k != "func"]
    print("config:", " ".join(f"{k}={v}" for k, v in pairs))


def _severity_label(severity: str) -> int:
    return features.LABEL_MALIGNANT if severity == "malignant" else features.LABEL_BENIGN


def cmd_features(args) -> int:
    text = Path(args.annotations).read_text()
    annotations, errors = roi.parse_annotations(text)
    problems = [f"{args.annotations}:{err.line_no}: {err.message}" for err in errors]

    records = []
    for ann in annotations:
        if ann.severity == "none" or not ann.has_geometry:
            continue
        image_path = Path(args.images) / f"{ann.id}.pgm"
        try:
            img = pgm.read_pgm(image_path.read_bytes())
            region = roi.crop_region(img, ann, mask_mode=args.mask, y_origin=args.y_origin)
        except (OSError, pgm.PgmError, roi.CropError) as err:
            problems.append(f"{image_path}: {err}")
            continue
        rec = features.compute_features(region, ann.id)
        rec.label = _severity_label(ann.severity)
        records.append(rec)

    features.write_feature_csv(records, args.out)
    for line in problems:
        print(f"warning: {line}" if args.lenient else f"error: {line}", file=sys.stderr)
    print(f"wrote {len(records)} feature records to {args.out}")
    if problems and not args.lenient:
        return 2
    return 0


def cmd_split(args) -> int:
    records = features.read_feature_csv(args.input)
    spec = training.SplitSpec(args.train_fraction, args.stratified, args.seed)
    train_part, test_part = training.split(records, spec)
    stem = args.out[:-4] if args.out.endswith(".csv") else args.out
    features.write_feature_csv(train_part, f"{stem}_train.csv")
    features.write_feature_csv(test_part, f"{stem}_test.csv")
    print(f"wrote {len(train_part)} train / {len(test_part)} test records to {stem}_*.csv")
    return 0


def cmd_train(args) -> int:
    records = features.read_feature_csv(args.input)
    samples = training.encode_targets(records)
    bias = False if args.paper_faithful else args.bias
    n = len(features.FEATURE_NAMES)
    topology = mlp.Topology(n, mlp.hidden_units(n), 1, bias_enabled=bias)
    cfg = training.TrainConfig(
        learning_rate=args.lr,
        max_epochs=args.max_epochs,
        target_total_mse=args.target_mse,
        seed=args.seed,
        init_range=args.init_range,
        update_mode=args.update,
    )
    model, report = training.train(samples, topology, cfg)
    mlp.save_model(model, args.model)
    report.save(args.out)

    from . import plots  # deferred: pulls in matplotlib

    plots.save_training_curve(report, Path(args.out).with_suffix(".png"))
    print(
        f"trained on {len(samples)} samples: {report.stop_reason} after "
        f"{report.epochs_used} epochs, total MSE {report.final_total_mse:.6g} "
        f"(per-sample {report.per_sample_mse:.6g})"
    )
    print(f"model -> {args.model}, report -> {args.out}")
    return 0


def cmd_predict(args) -> int:
    records = features.read_feature_csv(args.input)
    model = mlp.load_model(args.model)
    with open(args.out, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(PREDICTION_CSV_HEADER)
        for rec in records:
            out, _ = mlp.forward(model, rec.vector())
            score = float(out[0])
            predicted = evaluation.threshold_score(score, args.threshold)
            writer.writerow([
                rec.id,
                format(score, ".17g"),
                predicted,
                "" if rec.label is None else rec.label,
            ])
    print(f"scored {len(records)} records -> {args.out}")
    return 0


def _read_predictions(path: str) -> tuple[list[int], list[float | None], list[int | None]]:
    """Returns (truth, scores, stored predictions) from a prediction CSV."""
    truth: list[int] = []
    scores: list[float | None] = []
    stored: list[int | None] = []
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        fields = reader.fieldnames or []
        if "label" not in fields or ("score" not in fields and "predicted" not in fields):
            raise features.FeatureCsvError(
                f"{path}: need 'label' plus 'score' or 'predicted' columns, got {fields}"
            )
        for line_no, row in enumerate(reader, start=2):
            try:
                if not row.get("label"):
                    raise ValueError("missing truth label")
                truth.append(int(row["label"]))
                scores.append(float(row["score"]) if row.get("score") else None)
                stored.append(int(row["predicted"]) if row.get("predicted") else None)
            except ValueError as err:
                raise features.FeatureCsvError(f"{path}: line {line_no}: {err}") from None
    return truth, scores, stored


def cmd_eval(args) -> int:
    truth, scores, stored = _read_predictions(args.input)
    predicted = []
    for score, pred in zip(scores, stored):
        if score is not None:
            predicted.append(evaluation.threshold_score(score, args.threshold))
        elif pred is not None:
            predicted.append(pred)
        else:
            raise features.FeatureCsvError(f"{args.input}: row lacks both score and predicted")
    cm = evaluation.confusion(truth, predicted)
    rep = evaluation.metrics(cm, args.threshold)
    evaluation.write_report(cm, rep, args.out)

    from . import plots

    plots.save_confusion_matrix(cm, rep, Path(args.out).with_suffix(".png"))
    print(evaluation.render_report(cm, rep), end="")
    return 0


def cmd_gradcheck(args) -> int:
    worst = testkit.gradient_check(cases=args.cases, step=args.step, seed=args.seed)
    ok = worst < 1e-4
    print(
        f"gradcheck: max relative error {worst:.3e} over {args.cases} cases "
        f"(threshold 1e-04): {'OK' if ok else 'FAILED'}"
    )
    return 0 if ok else 2


def cmd_synth(args) -> int:
    spec = testkit.SynthSpec(n_per_class=args.n_per_class, spread=args.spread, seed=args.seed)
    records = testkit.gen_synthetic(spec)
    features.write_feature_csv(records, args.out)
    print(f"wrote {len(records)} synthetic records to {args.out}")
    return 0


def run(argv) -> int:
    """Parse and execute; returns the process exit code instead of exiting."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except _UsageError as err:
        print(f"error: {err}", file=sys.stderr)
        return 1
    except SystemExit as err:  # argparse exits itself on --help
        return int(err.code or 0)
    _print_config(args)
    try:
        return args.func(args)
    except _DATA_ERRORS as err:
        print(f"error: {err}", file=sys.stderr)
        return 2


def main() -> None:
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()
