"""
Rule-based lexicon sentiment scoring. Every token of a text gets its lexicon valence,
which is then adjusted by a few rules (intensifiers, negation, capitals, exclamation
marks and a contrastive 'but'). The adjusted valences are combined into negative,
neutral and positive proportions and into a compound score s / sqrt(s^2 + alpha).
"""

# standard library imports
from typing import Iterable, List, Optional, Sequence
import math
import unicodedata

# third party imports
from loguru import logger

# local imports
from sentipulse.definition.lexicon import Lexicon, RuleConstants, SentimentScore
from sentipulse.definition.records import TweetRecord, ScoredTweet

# words that increase (+1) or decrease (-1) the intensity of the following lexicon word
BOOSTER_WORDS = {
    "absolutely": 1,
    "amazingly": 1,
    "awfully": 1,
    "completely": 1,
    "considerably": 1,
    "decidedly": 1,
    "deeply": 1,
    "enormously": 1,
    "entirely": 1,
    "especially": 1,
    "exceptionally": 1,
    "extremely": 1,
    "fabulously": 1,
    "greatly": 1,
    "highly": 1,
    "hugely": 1,
    "incredibly": 1,
    "intensely": 1,
    "majorly": 1,
    "more": 1,
    "most": 1,
    "particularly": 1,
    "purely": 1,
    "quite": 1,
    "really": 1,
    "remarkably": 1,
    "so": 1,
    "substantially": 1,
    "thoroughly": 1,
    "totally": 1,
    "tremendously": 1,
    "unbelievably": 1,
    "unusually": 1,
    "utterly": 1,
    "very": 1,
    "almost": -1,
    "barely": -1,
    "hardly": -1,
    "kinda": -1,
    "less": -1,
    "little": -1,
    "marginally": -1,
    "occasionally": -1,
    "partly": -1,
    "scarcely": -1,
    "slightly": -1,
    "somewhat": -1,
    "sorta": -1,
}

NEGATION_WORDS = frozenset(
    [
        "aint",
        "arent",
        "cannot",
        "cant",
        "couldnt",
        "darent",
        "didnt",
        "doesnt",
        "dont",
        "hadnt",
        "hasnt",
        "havent",
        "isnt",
        "mightnt",
        "mustnt",
        "neither",
        "neednt",
        "never",
        "none",
        "nope",
        "nor",
        "not",
        "nothing",
        "nowhere",
        "oughtnt",
        "shant",
        "shouldnt",
        "uhuh",
        "wasnt",
        "werent",
        "without",
        "wont",
        "wouldnt",
        "rarely",
        "seldom",
        "despite",
    ]
)

CONTRAST_WORD = "but"

# scaling of a booster's effect with its distance (1, 2 or 3 tokens) to the lexicon word
BOOSTER_DISTANCE_SCALING = (1.0, 0.95, 0.9)


def normalize_compound(valence_sum: float, alpha: float = 15.0) -> float:
    """
    Maps a sum of valences into the open interval (-1, 1) via s / sqrt(s^2 + alpha).

    Parameters
    ----------
    valence_sum
        The (adjusted) sum of the token valences of a text.
    alpha
        Normalization constant; must be positive.

    Returns
    -------
        The compound score; sums of very large magnitude round to -1 or 1.
    """
    if not alpha > 0:
        raise ValueError(f"The normalization constant must be positive, found {alpha}")
    if math.isinf(valence_sum):
        return math.copysign(1.0, valence_sum)
    return valence_sum / math.hypot(valence_sum, math.sqrt(alpha))


def _strip_punctuation(token: str) -> str:
    start, end = 0, len(token)
    while start < end and unicodedata.category(token[start]).startswith("P"):
        start += 1
    while end > start and unicodedata.category(token[end - 1]).startswith("P"):
        end -= 1
    return token[start:end]


def tokenize(text: str, lexicon: Optional[Lexicon] = None) -> List[str]:
    """
    Splits a text on whitespace and strips leading/trailing punctuation from each token.
    The original casing is kept (it is needed for the capitals rule). A raw token which
    is itself a lexicon entry (an emoticon like ':D') is kept as it is; a token made of
    punctuation only is kept when it has at least two characters and dropped otherwise.
    Emoji are symbols, not punctuation, and are therefore never stripped.

    Parameters
    ----------
    text
        The text to tokenize.
    lexicon
        Optional lexicon for recognizing tokens that should not be stripped.

    Returns
    -------
    tokens
        The list of tokens in their order of appearance.
    """
    tokens = []
    for raw in text.split():
        if lexicon is not None and raw.lower() in lexicon:
            tokens.append(raw)
            continue
        stripped = _strip_punctuation(raw)
        if stripped:
            tokens.append(stripped)
        elif len(raw) > 1:
            tokens.append(raw)
    return tokens


def is_negation(word: str) -> bool:
    """Checks if a lowercase token negates the following lexicon word."""
    return word in NEGATION_WORDS or word.endswith("n't")


def is_cap_differential(tokens: Sequence[str]) -> bool:
    """True if some, but not all, of the given tokens are written in ALL CAPS."""
    n_caps = sum(1 for token in tokens if token.isupper())
    return 0 < n_caps < len(tokens)


def _booster_scalar(
    token: str, valence: float, rules: RuleConstants, cap_differential: bool
) -> float:
    direction = BOOSTER_WORDS.get(token.lower(), 0)
    if direction == 0 or rules.booster_increment == 0:
        return 0.0
    scalar = direction * rules.booster_increment
    if valence < 0:
        scalar *= -1
    if rules.caps_boost and cap_differential and token.isupper():
        scalar += rules.caps_boost if valence > 0 else -rules.caps_boost
    return scalar


def _token_valence(
    i: int,
    tokens: Sequence[str],
    lowered: Sequence[str],
    lexicon: Lexicon,
    rules: RuleConstants,
    cap_differential: bool,
) -> float:
    word = lowered[i]
    if rules.booster_increment != 0 and word in BOOSTER_WORDS:
        return 0.0
    if word not in lexicon:
        return 0.0
    valence = lexicon[word]

    # emphasis of a capitalized lexicon word in an otherwise lowercase text
    if rules.caps_boost and cap_differential and tokens[i].isupper():
        if valence > 0:
            valence += rules.caps_boost
        elif valence < 0:
            valence -= rules.caps_boost

    # look at the (up to) three preceding tokens
    for distance, scaling in enumerate(BOOSTER_DISTANCE_SCALING):
        j = i - distance - 1
        if j < 0:
            break
        if lowered[j] not in lexicon:
            scalar = _booster_scalar(tokens[j], valence, rules, cap_differential)
            valence += scaling * scalar
        if rules.negation_factor != 0 and is_negation(lowered[j]):
            valence *= rules.negation_factor
    return valence


def _contrast_reweighting(
    lowered: Sequence[str], valences: List[float], rules: RuleConstants
) -> List[float]:
    if CONTRAST_WORD not in lowered:
        return valences
    pre_weight = rules.but_pre_weight or 1.0
    post_weight = rules.but_post_weight or 1.0
    idx = lowered.index(CONTRAST_WORD)
    reweighted = []
    for j, valence in enumerate(valences):
        if j < idx:
            valence *= pre_weight
        elif j > idx:
            valence *= post_weight
        reweighted.append(valence)
    return reweighted


def adjusted_valences(
    text: str, lexicon: Lexicon, rules: Optional[RuleConstants] = None
) -> List[float]:
    """
    Computes the rule-adjusted valence of every token of a text. Tokens without a
    lexicon entry (and booster words) contribute a valence of zero.

    Parameters
    ----------
    text
        The text to analyze.
    lexicon
        Token-valence map.
    rules
        The rule constants; when None, the reference constants are used.

    Returns
    -------
        One adjusted valence per token.
    """
    rules = rules or RuleConstants.vader()
    tokens = tokenize(text, lexicon)
    lowered = [token.lower() for token in tokens]
    cap_differential = is_cap_differential(tokens)
    valences = [
        _token_valence(i, tokens, lowered, lexicon, rules, cap_differential)
        for i in range(len(tokens))
    ]
    return _contrast_reweighting(lowered, valences, rules)


def exclamation_amplifier(text: str, rules: RuleConstants) -> float:
    """Valence added because of (a capped number of) exclamation marks in the text."""
    n_marks = min(text.count("!"), rules.max_exclamations)
    return n_marks * rules.exclamation_increment


def score_valences(
    valences: Sequence[float], amplifier: float, alpha: float
) -> SentimentScore:
    """
    Combines adjusted token valences into proportions and the compound score. Each
    non-zero valence is shifted by one unit (away from zero) before the proportions are
    formed, so that sentiment-laden tokens are weighted against neutral tokens which
    count as one each.

    Parameters
    ----------
    valences
        The adjusted token valences.
    amplifier
        Non-negative punctuation emphasis added in the direction of the sum.
    alpha
        Normalization constant of the compound score.

    Returns
    -------
        The sentiment score; all zeros if no valences are given.
    """
    if len(valences) == 0:
        return SentimentScore()
    valence_sum = float(sum(valences))
    if valence_sum > 0:
        valence_sum += amplifier
    elif valence_sum < 0:
        valence_sum -= amplifier
    compound = normalize_compound(valence_sum, alpha)

    pos_sum, neg_sum, neu_count = 0.0, 0.0, 0
    for valence in valences:
        if valence > 0:
            pos_sum += valence + 1.0
        elif valence < 0:
            neg_sum += valence - 1.0
        else:
            neu_count += 1
    if pos_sum > abs(neg_sum):
        pos_sum += amplifier
    elif pos_sum < abs(neg_sum):
        neg_sum -= amplifier

    total = pos_sum + abs(neg_sum) + neu_count
    return SentimentScore(
        neg=abs(neg_sum) / total,
        neu=neu_count / total,
        pos=pos_sum / total,
        compound=compound,
    )


def score_text(
    text: str, lexicon: Lexicon, rules: Optional[RuleConstants] = None
) -> SentimentScore:
    """
    Scores a single text. Empty texts (and texts without tokens) yield the all-zero
    score instead of an error.

    Parameters
    ----------
    text
        Any unicode string.
    lexicon
        Token-valence map used for the lookup.
    rules
        The rule constants; when None, the reference constants are used.

    Returns
    -------
        The text's sentiment score.
    """
    rules = rules or RuleConstants.vader()
    valences = adjusted_valences(text, lexicon, rules)
    return score_valences(valences, exclamation_amplifier(text, rules), rules.alpha)


def score_tweets(
    records: Iterable[TweetRecord],
    lexicon: Lexicon,
    rules: Optional[RuleConstants] = None,
) -> List[ScoredTweet]:
    """
    Scores a sequence of tweets.

    Parameters
    ----------
    records
        The tweets to score.
    lexicon
        Token-valence map used for the lookup.
    rules
        The rule constants; when None, the reference constants are used.

    Returns
    -------
        The scored tweets in the order of the input.
    """
    rules = rules or RuleConstants.vader()
    scored = [
        ScoredTweet(record, score_text(record.text, lexicon, rules))
        for record in records
    ]
    logger.debug(f"Scored {len(scored)} tweets with {lexicon!r}")
    return scored
