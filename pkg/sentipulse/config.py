"""
Configuration layer. The configuration is an INI file read with configparser. The
default file shipped with the package is read first, a user file (if given) is layered
on top of it and single keys can finally be overridden (e.g. from command line flags).
"""

# standard library imports
from dataclasses import dataclass
from typing import Callable, Dict, List, Optional, Tuple, TypeVar
import configparser
import os

# third party imports
import pandas as pd
from loguru import logger

# local imports
from sentipulse.definition.lexicon import RuleConstants
from sentipulse.definition.records import TradingCalendar
from sentipulse.definition.split import SplitSpec
from sentipulse.inference.forecaster import CRITERIA
from sentipulse.subroutines import split_list
from sentipulse.subroutines import parse_duration
from sentipulse.subroutines import parse_time_range
from sentipulse.subroutines import parse_date

T = TypeVar("T")

DEFAULT_CONFIG_FILE = os.path.join(os.path.dirname(__file__), "data", "default.cfg")

ON_ERROR_POLICIES = ("abort", "skip")


@dataclass(frozen=True)
class ArimaSettings:
    """Order grid, selection criterion and optimizer settings of the ARIMA fits."""

    p_max: int = 5
    d_max: int = 2
    q_max: int = 5
    criterion: str = "aic"
    rolling: bool = False
    max_iter: int = 500
    xtol: float = 1e-8
    ftol: float = 1e-10


@dataclass(frozen=True)
class VarSettings:
    """Lag bound, selection criterion and differencing flag of the VAR fits."""

    p_max: int = 10
    difference: bool = False
    criterion: str = "aic"


class SentipulseConfig:
    """
    Typed access to the (layered) configuration. All accessors convert the raw strings
    of the INI file into the types used by the rest of the package; a value that cannot
    be converted raises a ValueError that names its section and key.

    Parameters
    ----------
    parser
        The configparser object holding the layered configuration.
    sources
        The files the configuration was read from (for logging and report metadata).
    """

    def __init__(self, parser: configparser.ConfigParser, sources: List[str]):
        self.parser = parser
        self.sources = sources

    def get(self, section: str, key: str) -> str:
        try:
            return self.parser.get(section, key)
        except (configparser.NoSectionError, configparser.NoOptionError) as e:
            raise ValueError(f"Missing configuration key [{section}] {key}") from e

    def _convert(self, section: str, key: str, converter: Callable[[str], T]) -> T:
        raw = self.get(section, key)
        try:
            return converter(raw)
        except ValueError as e:
            raise ValueError(
                f"Invalid value '{raw}' for configuration key [{section}] {key}: {e}"
            ) from e

    def get_int(self, section: str, key: str) -> int:
        return self._convert(section, key, int)

    def get_float(self, section: str, key: str) -> float:
        return self._convert(section, key, float)

    def get_bool(self, section: str, key: str) -> bool:
        try:
            return self.parser.getboolean(section, key)
        except ValueError as e:
            raise ValueError(
                f"Invalid boolean for configuration key [{section}] {key}: {e}"
            ) from e

    def get_list(self, section: str, key: str) -> List[str]:
        return split_list(self.get(section, key))

    def get_choice(self, section: str, key: str, choices: Tuple[str, ...]) -> str:
        value = self.get(section, key).strip().lower()
        if value not in choices:
            raise ValueError(
                f"Configuration key [{section}] {key} must be one of {choices}, "
                f"found '{value}'"
            )
        return value

    # ---------------------------------------------------------------------------------
    # entities
    # ---------------------------------------------------------------------------------

    @property
    def companies(self) -> List[str]:
        return self.get_list("entities", "companies")

    @property
    def ceos(self) -> Dict[str, str]:
        """Maps each company to its CEO (both lists are given in the same order)."""
        ceos = self.get_list("entities", "ceos")
        companies = self.companies
        if len(ceos) != len(companies):
            raise ValueError(
                f"[entities] lists {len(companies)} companies but {len(ceos)} CEOs"
            )
        return dict(zip(companies, ceos))

    @property
    def news(self) -> List[str]:
        return self.get_list("entities", "news")

    @property
    def covid_label(self) -> str:
        return self._news_label("covid")

    @property
    def vaccine_label(self) -> str:
        return self._news_label("vaccine")

    def _news_label(self, keyword: str) -> str:
        for label in self.news:
            if keyword in label.lower():
                return label
        raise ValueError(f"[entities] news contains no label for '{keyword}'")

    @property
    def labels(self) -> List[str]:
        """All query labels: companies, CEOs and news categories."""
        return self.companies + list(self.ceos.values()) + self.news

    # ---------------------------------------------------------------------------------
    # calendar, sentiment and panel
    # ---------------------------------------------------------------------------------

    @property
    def timezone(self) -> str:
        return self.get("calendar", "timezone").strip()

    def calendar(self, kind: str = "price") -> TradingCalendar:
        """
        Returns the trading calendar for prices ('price') or tweets ('tweet'). Both
        share the holidays and the weekday rule but have their own sessions.
        """
        if kind not in ("price", "tweet"):
            raise ValueError(f"Unknown calendar kind '{kind}'")
        start, end = self._convert("calendar", f"{kind}_session", parse_time_range)
        holidays = self._convert(
            "calendar", "holidays", lambda s: [parse_date(d) for d in split_list(s)]
        )
        return TradingCalendar(
            session_start=start,
            session_end=end,
            holidays=frozenset(holidays),
            weekdays_only=self.get_bool("calendar", "weekdays_only"),
            timezone=self.timezone,
        )

    @property
    def lexicon_path(self) -> Optional[str]:
        path = self.get("sentiment", "lexicon").strip()
        return path or None

    @property
    def rules(self) -> RuleConstants:
        return RuleConstants(
            alpha=self.get_float("sentiment", "alpha"),
            booster_increment=self.get_float("sentiment", "booster_increment"),
            negation_factor=self.get_float("sentiment", "negation_factor"),
            caps_boost=self.get_float("sentiment", "caps_boost"),
            exclamation_increment=self.get_float("sentiment", "exclamation_increment"),
            max_exclamations=self.get_int("sentiment", "max_exclamations"),
            but_pre_weight=self.get_float("sentiment", "but_pre_weight"),
            but_post_weight=self.get_float("sentiment", "but_post_weight"),
        )

    @property
    def bucket(self) -> pd.Timedelta:
        bucket = self._convert("panel", "bucket", parse_duration)
        if bucket <= pd.Timedelta(0):
            raise ValueError("[panel] bucket must be a positive duration")
        return bucket

    @property
    def bucket_offset(self) -> pd.Timedelta:
        return self._convert("panel", "bucket_offset", parse_duration)

    @property
    def lag(self) -> pd.Timedelta:
        return self._convert("panel", "lag", parse_duration)

    @property
    def resample(self) -> Optional[str]:
        value = self.get("panel", "resample").strip()
        return None if value.lower() in ("", "none") else value

    # ---------------------------------------------------------------------------------
    # split, models and evaluation
    # ---------------------------------------------------------------------------------

    @property
    def split(self) -> SplitSpec:
        return SplitSpec(
            train_start=self._convert("split", "train_start", parse_date),
            train_end=self._convert("split", "train_end", parse_date),
            test_start=self._convert("split", "test_start", parse_date),
            test_end=self._convert("split", "test_end", parse_date),
            excluded_dates=frozenset(
                self._convert(
                    "split",
                    "excluded",
                    lambda s: [parse_date(d) for d in split_list(s)],
                )
            ),
        )

    @property
    def arima(self) -> ArimaSettings:
        return ArimaSettings(
            p_max=self.get_int("arima", "p_max"),
            d_max=self.get_int("arima", "d_max"),
            q_max=self.get_int("arima", "q_max"),
            criterion=self.get_choice("arima", "criterion", CRITERIA),
            rolling=self.get_bool("arima", "rolling"),
            max_iter=self.get_int("arima", "max_iter"),
            xtol=self.get_float("arima", "xtol"),
            ftol=self.get_float("arima", "ftol"),
        )

    @property
    def var(self) -> VarSettings:
        return VarSettings(
            p_max=self.get_int("var", "p_max"),
            difference=self.get_bool("var", "difference"),
            criterion=self.get_choice("var", "criterion", CRITERIA),
        )

    @property
    def arima_covariates(self) -> List[str]:
        return self.get_list("evaluation", "arima_covariates")

    @property
    def var_covariates(self) -> List[str]:
        return self.get_list("evaluation", "var_covariates")

    @property
    def strict(self) -> bool:
        return self.get_bool("evaluation", "strict")

    @property
    def on_error(self) -> str:
        return self.get_choice("ingestion", "on_error", ON_ERROR_POLICIES)

    def as_dict(self) -> Dict[str, Dict[str, str]]:
        return {
            section: dict(self.parser.items(section))
            for section in self.parser.sections()
        }


def load_config(
    path: Optional[str] = None, overrides: Optional[Dict[str, str]] = None
) -> SentipulseConfig:
    """
    Reads the default configuration, layers an optional user file on top of it and
    applies single-key overrides.

    Parameters
    ----------
    path
        Path to a user configuration file (INI format). It may contain any subset of
        the default file's sections and keys.
    overrides
        Keys are given as 'section.key', values as strings in the INI syntax, for
        example {'arima.rolling': 'true'}.

    Returns
    -------
    config
        The layered configuration.
    """
    parser = configparser.ConfigParser(interpolation=None)
    with open(DEFAULT_CONFIG_FILE, "r", encoding="utf-8") as f:
        parser.read_file(f, source=DEFAULT_CONFIG_FILE)
    sources = [DEFAULT_CONFIG_FILE]

    if path:
        if not os.path.isfile(path):
            raise FileNotFoundError(f"Configuration file '{path}' does not exist")
        with open(path, "r", encoding="utf-8") as f:
            parser.read_file(f, source=path)
        sources.append(path)
        logger.debug(f"Layered configuration file '{path}' over the defaults")

    for dotted_key, value in (overrides or {}).items():
        section, _, key = dotted_key.partition(".")
        if not key:
            raise ValueError(
                f"Overrides must be given as 'section.key', found '{dotted_key}'"
            )
        if not parser.has_section(section):
            raise ValueError(f"Unknown configuration section '{section}'")
        parser.set(section, key, str(value))
        logger.debug(f"Configuration override [{section}] {key} = {value}")

    return SentipulseConfig(parser, sources)
