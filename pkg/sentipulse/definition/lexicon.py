# standard library imports
from collections.abc import Mapping
from dataclasses import dataclass, asdict, fields
from typing import Dict, Iterator, TextIO, Optional
import math
import os

# third party imports
from loguru import logger


class LexiconParseError(ValueError):
    """
    Raised when a line of a lexicon file cannot be interpreted.

    Parameters
    ----------
    line_number
        The 1-based number of the offending line in the lexicon file.
    reason
        Short description of what is wrong with the line.
    """

    def __init__(self, line_number: int, reason: str):
        self.line_number = line_number
        self.reason = reason
        super().__init__(f"Lexicon line {line_number}: {reason}")


class Lexicon(Mapping):
    """
    Immutable map from lowercase tokens to their valence. Valences are dimensionless
    sentiment intensities, typically in [-4, 4]. The class behaves like a read-only
    dictionary, so 'token in lexicon' and 'lexicon[token]' work as usual.

    Parameters
    ----------
    entries
        Token-valence pairs. Tokens must be non-empty and lowercase, valences finite.
    name
        Optional label used in log messages, e.g. the file the lexicon was read from.
    """

    def __init__(self, entries: Optional[Dict[str, float]] = None, name: str = ""):
        self.name = name
        self._entries = {}  # type: Dict[str, float]
        for token, valence in (entries or {}).items():
            if not token:
                raise ValueError("Lexicon tokens must not be empty")
            if token != token.lower():
                raise ValueError(f"Lexicon token '{token}' is not lowercase")
            valence = float(valence)
            if not math.isfinite(valence):
                raise ValueError(
                    f"Lexicon token '{token}' has a non-finite valence ({valence})"
                )
            self._entries[token] = valence

    def __getitem__(self, token: str) -> float:
        return self._entries[token]

    def __iter__(self) -> Iterator[str]:
        return iter(self._entries)

    def __len__(self) -> int:
        return len(self._entries)

    def __repr__(self) -> str:
        return f"Lexicon(name='{self.name}', n_entries={len(self)})"


@dataclass(frozen=True)
class RuleConstants:
    """
    Constants of the rule-based adjustments applied to the raw lexicon valences. A value
    of zero switches the corresponding rule off, so that tests can isolate the plain
    lexicon sum. Only 'alpha' is required to be positive.

    Parameters
    ----------
    alpha
        Normalization constant of the compound score s / sqrt(s^2 + alpha).
    booster_increment
        Absolute valence added by an intensifier ('very') or removed by a dampener
        ('slightly') in front of a lexicon word.
    negation_factor
        Multiplier applied to a lexicon word's valence for each negation word among the
        three preceding tokens.
    caps_boost
        Absolute valence added to an ALL-CAPS lexicon word when the text is only
        partially written in capitals.
    exclamation_increment
        Valence added per exclamation mark in the direction of the total sum.
    max_exclamations
        Maximum number of exclamation marks that are counted.
    but_pre_weight
        Weight of the valences before the first 'but' in a text.
    but_post_weight
        Weight of the valences after the first 'but' in a text.
    """

    alpha: float = 15.0
    booster_increment: float = 0.293
    negation_factor: float = -0.74
    caps_boost: float = 0.733
    exclamation_increment: float = 0.292
    max_exclamations: int = 3
    but_pre_weight: float = 0.5
    but_post_weight: float = 1.5

    def __post_init__(self):
        if not self.alpha > 0:
            raise ValueError(f"alpha must be positive, found {self.alpha}")
        if self.max_exclamations < 0:
            raise ValueError(
                f"max_exclamations must be non-negative, found {self.max_exclamations}"
            )
        for field in fields(self):
            value = getattr(self, field.name)
            if not math.isfinite(value):
                raise ValueError(f"Rule constant '{field.name}' is not finite: {value}")

    @classmethod
    def vader(cls, alpha: float = 15.0) -> "RuleConstants":
        """The constants of the reference rule set with the given alpha."""
        return cls(alpha=alpha)

    @classmethod
    def disabled(cls, alpha: float = 15.0) -> "RuleConstants":
        """All rules switched off; only the compound normalization remains."""
        return cls(
            alpha=alpha,
            booster_increment=0.0,
            negation_factor=0.0,
            caps_boost=0.0,
            exclamation_increment=0.0,
            max_exclamations=0,
            but_pre_weight=0.0,
            but_post_weight=0.0,
        )

    def as_dict(self) -> dict:
        return asdict(self)


@dataclass(frozen=True)
class SentimentScore:
    """
    Sentiment of a single text: the negative, neutral and positive proportions (which
    sum up to one for a text with at least one token) and the compound score in (-1, 1).
    """

    neg: float = 0.0
    neu: float = 0.0
    pos: float = 0.0
    compound: float = 0.0

    def as_dict(self) -> Dict[str, float]:
        return asdict(self)


def load_lexicon(source: TextIO, name: str = "") -> Lexicon:
    """
    Reads a lexicon from a text stream with one 'token<TAB>valence' pair per line. Lines
    starting with '#' and blank lines are ignored. Further tab-separated columns (as
    they are found in the reference lexicon, which also lists rater statistics) are
    ignored as well. When a token appears more than once, the last entry wins.

    Parameters
    ----------
    source
        A readable text stream, for example an opened UTF-8 file.
    name
        Optional label for the returned lexicon.

    Returns
    -------
    lexicon
        The parsed lexicon.
    """
    entries = {}  # type: Dict[str, float]
    for line_number, line in enumerate(source, start=1):
        line = line.rstrip("\r\n")
        if not line.strip() or line.lstrip().startswith("#"):
            continue
        columns = line.split("\t")
        if len(columns) < 2:
            raise LexiconParseError(line_number, "expected 'token<TAB>valence'")
        token = columns[0].strip().lower()
        if not token:
            raise LexiconParseError(line_number, "empty token")
        try:
            valence = float(columns[1])
        except ValueError:
            raise LexiconParseError(
                line_number, f"cannot parse valence '{columns[1]}'"
            ) from None
        if not math.isfinite(valence):
            raise LexiconParseError(line_number, f"non-finite valence '{columns[1]}'")
        if token in entries:
            logger.debug(f"Lexicon line {line_number} overwrites token '{token}'")
        entries[token] = valence
    lexicon = Lexicon(entries, name=name)
    logger.debug(f"Loaded {len(lexicon)} lexicon entries from '{name or 'stream'}'")
    return lexicon


def bundled_lexicon_path() -> str:
    """Returns the path of the English lexicon shipped with the package."""
    package_dir = os.path.dirname(os.path.dirname(__file__))
    return os.path.join(package_dir, "data", "lexicon.tsv")


def read_lexicon_file(path: Optional[str] = None) -> Lexicon:
    """
    Loads a lexicon file (UTF-8). When no path is given, the bundled lexicon is used.

    Parameters
    ----------
    path
        Path to the TSV file or None for the bundled lexicon.

    Returns
    -------
        The parsed lexicon.
    """
    path = path or bundled_lexicon_path()
    with open(path, "r", encoding="utf-8") as f:
        return load_lexicon(f, name=os.path.basename(path))
