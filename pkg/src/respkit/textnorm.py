"""Text normalization and lightweight string similarity primitives."""

from __future__ import annotations

import re
from collections import Counter

_WS_RE = re.compile(r"\s+")
_WORD_RE = re.compile(r"\w+")
# Leading quotation markers commonly used in responses: ">", ">>", "Q:", "Q1:",
# "1.", "1)", "(1)", "-", "*". Stripped repeatedly so "> Q1: text" also works.
_QUOTE_MARKER_RE = re.compile(r"^(?:>+|q\d*\s*[:.)]|\(?\d+[:.)]|[-*])\s*", re.IGNORECASE)


def normalize_ws(text: str) -> str:
    """Collapse all whitespace runs to single spaces and strip the ends."""
    return _WS_RE.sub(" ", text).strip()


def strip_quote_markers(text: str) -> str:
    """Remove leading quote/numbering markers ("> ", "Q:", "1.", ...)."""
    out = normalize_ws(text)
    while True:
        stripped = _QUOTE_MARKER_RE.sub("", out, count=1)
        if stripped == out:
            return out
        out = stripped


def word_tokens(text: str) -> list[str]:
    """Lowercase word tokens."""
    return _WORD_RE.findall(text.lower())


def word_count(text: str) -> int:
    """Whitespace-token count; the word counter used for all length metrics."""
    return len(text.split())


def lcs_length(a, b) -> int:
    """Length of the longest common subsequence of two sequences."""
    if not a or not b:
        return 0
    if isinstance(a, str) and isinstance(b, str):
        return _lcs_chars(a, b)
    prev = [0] * (len(b) + 1)
    for x in a:
        cur = [0] * (len(b) + 1)
        for j, y in enumerate(b, start=1):
            if x == y:
                cur[j] = prev[j - 1] + 1
            else:
                cur[j] = max(prev[j], cur[j - 1])
        prev = cur
    return prev[-1]


def _lcs_chars(a: str, b: str) -> int:
    """Bit-parallel LCS length: one big-int update per character of b."""
    m = len(a)
    masks: dict[str, int] = {}
    for i, ch in enumerate(a):
        masks[ch] = masks.get(ch, 0) | (1 << i)
    full = (1 << m) - 1
    s = full
    for ch in b:
        u = s & masks.get(ch, 0)
        s = ((s + u) | (s - u)) & full
    return m - bin(s).count("1")


def indel_ratio(s1: str, s2: str) -> float:
    """Insert/delete similarity of two strings on a 0-100 scale.

    Equals 100 * 2*LCS / (len(s1)+len(s2)); 100 iff the strings are equal.
    """
    total = len(s1) + len(s2)
    if total == 0:
        return 100.0
    return 200.0 * lcs_length(s1, s2) / total


def partial_ratio(s1: str, s2: str, score_cutoff: float = 0.0) -> float:
    """Best fuzzy match of the shorter string against the longer, in [0, 100].

    The shorter string is scored with `indel_ratio` against every window of
    its own length in the longer string and the maximum is returned, so the
    score is 100 exactly when the shorter string occurs verbatim. Empty input
    (after whitespace normalization) scores 0.

    Windows whose character-count bound cannot reach ``score_cutoff`` (or the
    best score so far) are skipped; scores below the cutoff may be reported
    as 0, so pass a cutoff only when thresholding.
    """
    s1 = normalize_ws(s1)
    s2 = normalize_ws(s2)
    if not s1 or not s2:
        return 0.0
    shorter, longer = (s1, s2) if len(s1) <= len(s2) else (s2, s1)
    if shorter in longer:
        return 100.0
    n = len(shorter)
    total = 2 * n

    # Sliding multiset intersection gives an LCS upper bound per window.
    need = Counter(shorter)
    window = Counter(longer[:n])
    common = sum((need & window).values())

    best = 0.0
    for start in range(len(longer) - n + 1):
        if start > 0:
            gone = longer[start - 1]
            if window[gone] <= need.get(gone, 0):
                common -= 1
            window[gone] -= 1
            came = longer[start + n - 1]
            window[came] += 1
            if window[came] <= need.get(came, 0):
                common += 1
        bound = 200.0 * common / total
        if bound <= best or bound < score_cutoff:
            continue
        best = max(best, indel_ratio(shorter, longer[start : start + n]))
        if best == 100.0:
            break
    return best


def bigram_overlap(s1: str, s2: str) -> float:
    """Share of s1's distinct word bigrams that also occur in s2, in [0, 100].

    Directional: s1 is the sentence being explained, s2 the (longer) edit
    text. Fewer than two tokens in s1 yields 0.
    """
    b1 = _bigrams(word_tokens(s1))
    if not b1:
        return 0.0
    b2 = _bigrams(word_tokens(s2))
    return 100.0 * len(b1 & b2) / len(b1)


def _bigrams(tokens: list[str]) -> set[tuple[str, str]]:
    return {(tokens[i], tokens[i + 1]) for i in range(len(tokens) - 1)}


def cosine_similarity_100(u, v) -> float:
    """Cosine similarity mapped to [0, 100] via 100 * max(0, cos)."""
    dot = sum(a * b for a, b in zip(u, v))
    nu = sum(a * a for a in u) ** 0.5
    nv = sum(b * b for b in v) ** 0.5
    if nu == 0.0 or nv == 0.0:
        return 0.0
    return 100.0 * max(0.0, dot / (nu * nv))


_SENT_BOUNDARY_RE = re.compile(r"(?<=[.!?])\s+(?=[A-Z\"'(\[\d])")

_ABBREVIATIONS = ("e.g.", "i.e.", "et al.", "cf.", "vs.", "fig.", "eq.", "sec.", "dr.", "mr.", "ms.")


def segment_sentences(text: str) -> list[str]:
    """Rule-based sentence splitter used when no segmenter provider is given.

    Splits on terminal punctuation followed by whitespace and an upper-case or
    numeric start, then re-joins splits caused by common abbreviations.
    """
    text = normalize_ws(text)
    if not text:
        return []
    parts = _SENT_BOUNDARY_RE.split(text)
    merged: list[str] = []
    for part in parts:
        if merged and merged[-1].lower().endswith(_ABBREVIATIONS):
            merged[-1] = merged[-1] + " " + part
        else:
            merged.append(part)
    return [p for p in (normalize_ws(m) for m in merged) if p]
