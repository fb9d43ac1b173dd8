"""
The 'sentipulse' command line. Every subcommand reads the layered configuration (the
bundled defaults, an optional --config file and --set overrides) and logs through
loguru.
"""

# standard library imports
from typing import Dict, Optional, Sequence, Tuple
import argparse
import json
import os
import sys

# third party imports
import numpy as np
import pandas as pd
from loguru import logger

# local imports
from sentipulse import __version__
from sentipulse.config import load_config, SentipulseConfig, CRITERIA
from sentipulse.config import ON_ERROR_POLICIES
from sentipulse.definition.lexicon import read_lexicon_file
from sentipulse.definition.panel import Panel, read_panel, panel_file_name
from sentipulse.definition.panel import SENTIMENT_CATEGORIES, SENTIMENT_COLUMNS
from sentipulse.evaluation.backtest import run_evaluation, FAMILIES
from sentipulse.inference.arima.model import ArimaFitError
from sentipulse.inference.arima.selection import auto_select
from sentipulse.inference.var.analysis import granger_matrix, impulse_response
from sentipulse.inference.var.model import default_p_max, fit_var, select_var_lag
from sentipulse.ingestion.store import ingest_directories
from sentipulse.ingestion.store import read_store_tweets, read_store_bars
from sentipulse.panel.builder import build_company_panels, resample_panel
from sentipulse.panel.correlation import correlation_matrix
from sentipulse.postprocessing.reports import render_correlation, write_report_files
from sentipulse.sentiment.engine import score_text, score_tweets
from sentipulse.subroutines import logging_setup, print_sentipulse_header
from sentipulse.subroutines import parse_date, split_list, print_dict_in_rows
from sentipulse.synthetic import synthesize_dataset


def _covariate_columns(spec: str) -> Tuple[str, ...]:
    """
    Translates a comma separated list of sentiment categories ('company,vaccine') into
    panel columns. 'all' stands for all five categories, 'none' for no covariates.
    """
    keys = [key.lower() for key in split_list(spec)]
    if keys in ([], ["none"], ["history"]):
        return ()
    if keys == ["all"]:
        return SENTIMENT_COLUMNS
    unknown = [key for key in keys if key not in SENTIMENT_CATEGORIES]
    if unknown:
        raise ValueError(
            f"Unknown sentiment categories {unknown}, use "
            f"{list(SENTIMENT_CATEGORIES)}, 'all' or 'none'"
        )
    return tuple(f"{key}S" for key in keys)


def _read_cli_panel(path: str, company: Optional[str], config: SentipulseConfig):
    """Reads a panel; the company defaults to the configured one named by the file."""
    if company is None:
        name = os.path.basename(path)
        matches = [c for c in config.companies if panel_file_name(c) == name]
        company = matches[0] if matches else os.path.splitext(name)[0]
    return read_panel(path, company, config.timezone)


def _training_rows(
    panel: Panel, train_end: Optional[str], config: SentipulseConfig
) -> Panel:
    """Rows dated on or before the training end that are not excluded."""
    split = config.split
    last = parse_date(train_end) if train_end else split.train_end
    mask = [
        t.date() <= last and t.date() not in split.excluded_dates
        for t in panel.instants
    ]
    train = panel.select(mask)
    if len(train) == 0:
        raise ValueError(f"No training rows on or before {last}")
    return train


def _write_json(data: dict, path: Optional[str]):
    text = json.dumps(data, indent=2, sort_keys=True)
    if path:
        with open(path, "w", encoding="utf-8") as f:
            f.write(text + "\n")
        logger.info(f"Wrote '{path}'")
    else:
        print(text)


def _csv(frame: pd.DataFrame) -> str:
    return frame.to_csv(index=False, float_format="%.10g", lineterminator="\n")


def _write_text(text: str, path: Optional[str]):
    if path:
        with open(path, "w", encoding="utf-8", newline="") as f:
            f.write(text)
        logger.info(f"Wrote '{path}'")
    else:
        sys.stdout.write(text)


# -------------------------------------------------------------------------------------
# subcommands
# -------------------------------------------------------------------------------------


def cmd_score(args: argparse.Namespace, config: SentipulseConfig) -> int:
    lexicon = read_lexicon_file(args.lexicon or config.lexicon_path)
    rules = config.rules
    if args.text is not None:
        print_dict_in_rows(
            score_text(args.text, lexicon, rules).as_dict(), printer=print
        )
        return 0
    sep = "\t" if args.input.lower().endswith((".tsv", ".tab")) else ","
    frame = pd.read_csv(args.input, sep=sep, dtype=str, keep_default_na=False)
    missing = [c for c in ("id", "text") if c not in frame.columns]
    if missing:
        raise ValueError(f"The input '{args.input}' misses the column(s) {missing}")
    rows = []
    for tweet_id, text in zip(frame["id"], frame["text"]):
        score = score_text(text, lexicon, rules)
        rows.append((tweet_id, score.neg, score.neu, score.pos, score.compound))
    scores = pd.DataFrame(rows, columns=["tweet_id", "neg", "neu", "pos", "compound"])
    _write_text(_csv(scores), args.output)
    logger.info(f"Scored {len(scores)} texts with {lexicon!r}")
    return 0


def cmd_ingest(args: argparse.Namespace, config: SentipulseConfig) -> int:
    counts = ingest_directories(
        tweets_dir=args.tweets,
        stocks_dir=args.stocks,
        labels=config.labels,
        companies=config.companies,
        tweet_calendar=config.calendar("tweet"),
        price_calendar=config.calendar("price"),
        on_error=args.on_error or config.on_error,
        store_dir=args.out,
    )
    logger.info("Kept records:")
    print_dict_in_rows(counts, printer=logger.info)
    return 0


def cmd_build_panel(args: argparse.Namespace, config: SentipulseConfig) -> int:
    lexicon = read_lexicon_file(args.lexicon or config.lexicon_path)
    tweets = read_store_tweets(args.store, config.labels, config.timezone)
    bars = read_store_bars(args.store, config.companies, config.timezone)
    scored = score_tweets(
        [record for records in tweets.values() for record in records],
        lexicon,
        config.rules,
    )
    panels = build_company_panels(
        scored,
        bars,
        config.ceos,
        config.covid_label,
        config.vaccine_label,
        bucket=config.bucket,
        offset=config.bucket_offset,
        lag=config.lag,
    )
    os.makedirs(args.out, exist_ok=True)
    for company, panel in panels.items():
        if config.resample:
            panel = resample_panel(panel, config.resample)
        panel.to_csv(os.path.join(args.out, panel_file_name(company)))
        logger.info(f"Panel of '{company}': {len(panel)} rows")
    return 0


def cmd_correlate(args: argparse.Namespace, config: SentipulseConfig) -> int:
    panel = _read_cli_panel(args.panel, args.company, config)
    rule = args.resample or config.resample
    if rule:
        panel = resample_panel(panel, rule)
    _write_text(render_correlation(correlation_matrix(panel)), args.out)
    return 0


def cmd_fit_arima(args: argparse.Namespace, config: SentipulseConfig) -> int:
    panel = _read_cli_panel(args.panel, args.company, config)
    train = _training_rows(panel, args.train_end, config)
    columns = _covariate_columns(args.covariates)
    settings = config.arima
    if args.grid:
        p_max, d_max, q_max = [int(v) for v in split_list(args.grid)]
    else:
        p_max, d_max, q_max = settings.p_max, settings.d_max, settings.q_max
    fit = auto_select(
        train.column("open"),
        train.matrix(columns) if columns else None,
        p_max=p_max,
        d_max=d_max,
        q_max=q_max,
        criterion=args.criterion or settings.criterion,
        origin=train.instants[-1],
        max_iter=settings.max_iter,
        xtol=settings.xtol,
        ftol=settings.ftol,
    )
    data = fit.to_dict()
    data["company"] = panel.company
    data["covariates"] = list(columns)
    _write_json(data, args.out)
    return 0


def _var_data(args: argparse.Namespace, config: SentipulseConfig):
    panel = _read_cli_panel(args.panel, args.company, config)
    train = _training_rows(panel, args.train_end, config)
    labels = ("open",) + _covariate_columns(args.covariates)
    return panel, train.matrix(labels), labels


def cmd_fit_var(args: argparse.Namespace, config: SentipulseConfig) -> int:
    panel, data, labels = _var_data(args, config)
    p_max = args.p_max or min(config.var.p_max, default_p_max(*data.shape))
    if config.var.difference:
        data = np.diff(data, axis=0)
    p, fit = select_var_lag(data, p_max, labels, args.criterion or config.var.criterion)
    result = fit.to_dict()
    result["company"] = panel.company
    result["difference"] = config.var.difference
    _write_json(result, args.out)
    return 0


def cmd_granger(args: argparse.Namespace, config: SentipulseConfig) -> int:
    _, data, labels = _var_data(args, config)
    if len(labels) < 2:
        raise ValueError("Granger tests need at least one sentiment covariate")
    p = args.lags
    if p is None:
        p_max = min(config.var.p_max, default_p_max(*data.shape))
        p, _ = select_var_lag(data, p_max, labels, config.var.criterion)
    rows = [
        (r.cause, r.effect, r.f_stat, r.p_value, r.df[0], r.df[1])
        for r in granger_matrix(data, labels, p)
    ]
    frame = pd.DataFrame(
        rows, columns=["cause", "effect", "f_stat", "p_value", "df_num", "df_den"]
    )
    _write_text(_csv(frame), args.out)
    return 0


def cmd_irf(args: argparse.Namespace, config: SentipulseConfig) -> int:
    _, data, labels = _var_data(args, config)
    if args.lags is None:
        p_max = min(config.var.p_max, default_p_max(*data.shape))
        _, fit = select_var_lag(data, p_max, labels, config.var.criterion)
    else:
        fit = fit_var(data, args.lags, labels)
    irf = impulse_response(fit, args.horizon)
    rows = [
        (h, effect, shock, irf.responses[h, i, j])
        for h in range(irf.horizon + 1)
        for i, effect in enumerate(labels)
        for j, shock in enumerate(labels)
    ]
    frame = pd.DataFrame(rows, columns=["h", "effect", "shock", "response"])
    _write_text(_csv(frame), args.out)
    return 0


def cmd_evaluate(args: argparse.Namespace, config: SentipulseConfig) -> int:
    panels = {}
    for company in config.companies:
        path = os.path.join(args.panels, panel_file_name(company))
        if os.path.isfile(path):
            panels[company] = read_panel(path, company, config.timezone)
        else:
            logger.warning(f"No panel file for '{company}' ({path})")
    families = FAMILIES if args.family == "both" else (args.family.upper(),)
    n_failed = 0
    for family in families:
        keys = config.arima_covariates if family == "ARIMA" else config.var_covariates
        report = run_evaluation(
            panels,
            family,
            keys,
            config.split,
            arima=config.arima,
            var=config.var,
            companies=config.companies,
        )
        write_report_files(report, args.out)
        n_failed += report.n_failed
    strict = args.strict or config.strict
    if n_failed and strict:
        logger.error(f"{n_failed} evaluation cell(s) failed")
        return 1
    return 0


def cmd_synthesize(args: argparse.Namespace, config: SentipulseConfig) -> int:
    paths = synthesize_dataset(args.out, seed=args.seed, n_days=args.days)
    print_dict_in_rows(paths, printer=logger.info)
    return 0


COMMANDS = {
    "score": cmd_score,
    "ingest": cmd_ingest,
    "build-panel": cmd_build_panel,
    "correlate": cmd_correlate,
    "fit-arima": cmd_fit_arima,
    "fit-var": cmd_fit_var,
    "granger": cmd_granger,
    "irf": cmd_irf,
    "evaluate": cmd_evaluate,
    "synthesize": cmd_synthesize,
}


# -------------------------------------------------------------------------------------
# argument parsing
# -------------------------------------------------------------------------------------


def _add_panel_arguments(parser: argparse.ArgumentParser, covariates: str):
    parser.add_argument("--panel", required=True, help="panel CSV file")
    parser.add_argument(
        "--company", help="company of the panel (default: from the file name)"
    )
    parser.add_argument(
        "--covariates",
        default=covariates,
        help="comma separated sentiment categories, 'all' or 'none'",
    )
    parser.add_argument(
        "--train-end", help="last training date (default: [split] train_end)"
    )
    parser.add_argument("--out", help="output file (default: stdout)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="sentipulse",
        description="Lexicon sentiment of social media text and stock price "
        "forecasting with ARIMA and VAR models.",
    )
    parser.add_argument("--version", action="version", version=__version__)
    parser.add_argument("--config", help="configuration file layered over the defaults")
    parser.add_argument(
        "--set",
        action="append",
        default=[],
        metavar="SECTION.KEY=VALUE",
        help="override a single configuration key (repeatable)",
    )
    parser.add_argument("--log-level", default="INFO", help="console log level")
    parser.add_argument("--log-file", help="additional log file (level DEBUG)")
    parser.add_argument(
        "--no-header", action="store_true", help="do not log the banner"
    )
    sub = parser.add_subparsers(dest="command", required=True)
    # lets '--config' also follow the subcommand; it then takes precedence
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument(
        "--config",
        dest="command_config",
        default=argparse.SUPPRESS,
        help="configuration file layered over the defaults",
    )

    def add_command(name: str, description: str) -> argparse.ArgumentParser:
        return sub.add_parser(name, help=description, parents=[common])

    p = add_command("score", "score texts with the valence lexicon")
    p.add_argument("--lexicon", help="lexicon TSV (default: [sentiment] lexicon)")
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--input", help="CSV/TSV file with the columns id and text")
    group.add_argument("--text", help="a single text to score")
    p.add_argument("--output", help="scores CSV (default: stdout)")

    p = add_command("ingest", "parse raw tweet and price files into a store")
    p.add_argument("--tweets", required=True, help="directory of raw tweet files")
    p.add_argument("--stocks", required=True, help="directory of raw price files")
    p.add_argument("--out", required=True, help="store directory")
    p.add_argument(
        "--calendar",
        dest="command_config",
        default=argparse.SUPPRESS,
        metavar="CONFIG",
        help="configuration file with the calendar and the labels (as --config)",
    )
    p.add_argument("--on-error", choices=ON_ERROR_POLICIES, help="bad-row policy")

    p = add_command("build-panel", "build the per-company panels")
    p.add_argument("--store", required=True, help="store directory")
    p.add_argument("--out", required=True, help="panel directory")
    p.add_argument("--lexicon", help="lexicon TSV (default: [sentiment] lexicon)")
    p.add_argument("--lag", help="sentiment lag, e.g. 1h (default: [panel] lag)")

    p = add_command("correlate", "Pearson correlation matrix of a panel")
    p.add_argument("--panel", required=True, help="panel CSV file")
    p.add_argument("--company", help="company of the panel")
    p.add_argument("--resample", help="resample rule, e.g. 1D")
    p.add_argument("--out", help="matrix CSV (default: stdout)")

    p = add_command("fit-arima", "select and fit an ARIMA model")
    _add_panel_arguments(p, covariates="none")
    p.add_argument("--grid", help="p_max,d_max,q_max (default: [arima] section)")
    p.add_argument("--criterion", choices=CRITERIA)

    p = add_command("fit-var", "select and fit a VAR model")
    _add_panel_arguments(p, covariates="company")
    p.add_argument("--p-max", type=int)
    p.add_argument("--criterion", choices=CRITERIA)
    p.add_argument("--difference", action="store_true", help="fit on first differences")

    p = add_command("granger", "Granger causality tests of a VAR")
    _add_panel_arguments(p, covariates="all")
    p.add_argument("--lags", type=int, help="lag order (default: selected)")

    p = add_command("irf", "impulse responses of a VAR")
    _add_panel_arguments(p, covariates="all")
    p.add_argument("--lags", type=int, help="lag order (default: selected)")
    p.add_argument("--horizon", type=int, default=10)

    p = add_command("evaluate", "run the MAPE backtest")
    p.add_argument("--panels", required=True, help="panel directory")
    p.add_argument("--out", required=True, help="report directory")
    p.add_argument("--family", choices=("arima", "var", "both"), default="both")
    p.add_argument("--strict", action="store_true", help="exit 1 on failed cells")
    p.add_argument(
        "--rolling", action="store_true", help="refit ARIMA before each test step"
    )
    p.add_argument(
        "--difference", action="store_true", help="fit the VARs on first differences"
    )

    p = add_command("synthesize", "write a synthetic raw dataset")
    p.add_argument("--out", required=True, help="target directory")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--days", type=int, default=30, help="number of trading days")
    return parser


def _overrides(args: argparse.Namespace) -> Dict[str, str]:
    overrides = {}
    for item in args.set:
        key, sep, value = item.partition("=")
        if not sep:
            raise ValueError(
                f"Overrides need the form SECTION.KEY=VALUE, found '{item}'"
            )
        overrides[key.strip()] = value.strip()
    if getattr(args, "lag", None):
        overrides["panel.lag"] = args.lag
    if getattr(args, "rolling", False):
        overrides["arima.rolling"] = "true"
    if getattr(args, "difference", False):
        overrides["var.difference"] = "true"
    return overrides


def main(argv: Optional[Sequence[str]] = None) -> int:
    """
    Entry point of the 'sentipulse' command.

    Parameters
    ----------
    argv
        The command line arguments without the program name (default: sys.argv).

    Returns
    -------
        The exit code: 0 on success, 1 if --strict evaluation cells failed and 2 for
        invalid input or failed procedures.
    """
    args = build_parser().parse_args(argv)
    logging_setup(log_level_stdout=args.log_level.upper(), log_file=args.log_file)
    if not args.no_header:
        print_sentipulse_header()
    try:
        path = getattr(args, "command_config", None) or args.config
        config = load_config(path, _overrides(args))
        return COMMANDS[args.command](args, config)
    except (
        ValueError,
        FileNotFoundError,
        RuntimeError,
        np.linalg.LinAlgError,
    ) as error:
        if isinstance(error, ArimaFitError):
            logger.error(f"ARIMA estimation failed: {error}")
        else:
            logger.error(f"{type(error).__name__}: {error}")
        return 2
