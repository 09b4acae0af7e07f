"""Rule-based linguistic front end: tokenizer, tagger, chunker, clause splitter.

Everything here is a pure function of (text, ontology); the tag cascade and
the chunk grammar are deliberately small and pinned by golden tests.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from enum import Enum
from typing import Optional

from .ontology import Ontology

_TOKEN_RE = re.compile(r"[^\s,.;:!?]+|[,.;:!?]")
_NUM_RE = re.compile(r"^\d+([./]\d+)?$")

DETERMINERS = {"the", "a", "an", "this", "that", "these", "those", "some", "all", "each", "its"}
PREPOSITIONS = {
    "to", "in", "on", "with", "into", "over", "from", "of", "at", "for",
    "until", "under", "onto", "through",
}
CONJUNCTIONS = {"and", "or", "but", "while", "then"}
NUMBER_WORDS = {
    "one", "two", "three", "four", "five", "six", "seven", "eight", "nine",
    "ten", "eleven", "twelve", "half", "dozen",
}
# recipe adverbs that do not end in -ly and must not be mistaken for nouns
ADVERBS = {
    "lengthwise", "crosswise", "well", "together", "aside", "apart",
    "overnight", "again", "once", "twice", "meanwhile",
}
SENTENCE_FINAL = {".", "!", "?"}
CLAUSE_PUNCT = {",", ";"}


class Tag(str, Enum):
    VERB = "VERB"
    NOUN = "NOUN"
    ADJ = "ADJ"
    DET = "DET"
    PREP = "PREP"
    CONJ = "CONJ"
    PUNCT = "PUNCT"
    NUM = "NUM"
    OTHER = "OTHER"


class ChunkKind(str, Enum):
    VP = "VP"
    NP = "NP"
    PP = "PP"


class TemporalMarker(str, Enum):
    WHILE = "WHILE"
    MEANWHILE = "MEANWHILE"
    NONE = "NONE"


@dataclass(frozen=True)
class Token:
    surface: str
    char_start: int
    char_end: int
    index: int

    @property
    def lower(self) -> str:
        return self.surface.lower()


@dataclass(frozen=True)
class TaggedToken:
    token: Token
    tag: Tag


@dataclass(frozen=True)
class Chunk:
    kind: ChunkKind
    tokens: tuple[TaggedToken, ...]
    head: Token
    preposition: Optional[str] = None

    @property
    def start_index(self) -> int:
        return self.tokens[0].token.index

    @property
    def end_index(self) -> int:
        return self.tokens[-1].token.index


@dataclass
class Clause:
    id: str
    index: int  # 1-based position in text order
    char_start: int
    char_end: int
    chunks: list[Chunk] = field(default_factory=list)
    temporal_marker: TemporalMarker = TemporalMarker.NONE

    @property
    def verb_phrase(self) -> Optional[Chunk]:
        for ch in self.chunks:
            if ch.kind is ChunkKind.VP:
                return ch
        return None


def tokenize(text: str) -> list[Token]:
    """Split on whitespace; sentence/clause punctuation becomes its own token."""
    return [
        Token(m.group(0), m.start(), m.end(), i)
        for i, m in enumerate(_TOKEN_RE.finditer(text))
    ]


def tag(tokens: list[Token], ontology: Ontology) -> list[TaggedToken]:
    """Deterministic tag cascade keyed to the ontology's lexical variants."""
    tagged: list[TaggedToken] = []
    clause_initial = True
    for tok in tokens:
        word = tok.lower
        prev_tag = tagged[-1].tag if tagged else None
        if word in SENTENCE_FINAL or word in CLAUSE_PUNCT or word in {":", "!", "?"}:
            t = Tag.PUNCT
        elif _NUM_RE.match(word) or word in NUMBER_WORDS:
            t = Tag.NUM
        elif word in DETERMINERS:
            t = Tag.DET
        elif word in CONJUNCTIONS:
            t = Tag.CONJ
        elif word in PREPOSITIONS:
            t = Tag.PREP
        elif word in ADVERBS or word.endswith("ly"):
            t = Tag.OTHER
        elif ontology.is_action_form(word):
            # nominal use after a determiner/adjective ("a slice"), verbal
            # otherwise; clause-initial position always reads as an imperative
            if not clause_initial and prev_tag in (Tag.DET, Tag.ADJ, Tag.NUM):
                t = Tag.NOUN
            else:
                t = Tag.VERB
        elif ontology.is_food_form(word):
            t = Tag.NOUN
        elif word.endswith(("ed", "ing")) and prev_tag in (Tag.NOUN, Tag.DET):
            t = Tag.ADJ
        else:
            t = Tag.NOUN
        tagged.append(TaggedToken(tok, t))
        if t in (Tag.PUNCT, Tag.CONJ):
            clause_initial = True
        elif t is not Tag.OTHER:
            clause_initial = False
    return tagged


def chunk(tagged: list[TaggedToken]) -> list[Chunk]:
    """Greedy left-to-right chunking: NP := DET? NUM? ADJ* NOUN+,
    PP := PREP NP, VP := VERB OTHER*."""
    chunks: list[Chunk] = []
    i = 0
    n = len(tagged)

    def match_np(j: int) -> Optional[int]:
        k = j
        if k < n and tagged[k].tag is Tag.DET:
            k += 1
        if k < n and tagged[k].tag is Tag.NUM:
            k += 1
        while k < n and tagged[k].tag is Tag.ADJ:
            k += 1
        start_nouns = k
        while k < n and tagged[k].tag is Tag.NOUN:
            k += 1
        return k if k > start_nouns else None

    while i < n:
        t = tagged[i]
        if t.tag is Tag.VERB:
            j = i + 1
            while j < n and tagged[j].tag is Tag.OTHER:
                j += 1
            chunks.append(Chunk(ChunkKind.VP, tuple(tagged[i:j]), t.token))
            i = j
        elif t.tag is Tag.PREP:
            end = match_np(i + 1)
            if end is not None:
                span = tuple(tagged[i:end])
                head = next(
                    tt.token for tt in reversed(span) if tt.tag is Tag.NOUN
                )
                chunks.append(Chunk(ChunkKind.PP, span, head, preposition=t.token.lower))
                i = end
            else:
                i += 1
        else:
            end = match_np(i)
            if end is not None:
                span = tuple(tagged[i:end])
                head = next(
                    tt.token for tt in reversed(span) if tt.tag is Tag.NOUN
                )
                chunks.append(Chunk(ChunkKind.NP, span, head))
                i = end
            else:
                i += 1
    return chunks


def segment_clauses(
    text: str, tagged: list[TaggedToken], chunks: list[Chunk]
) -> list[Clause]:
    """Split into clauses so each holds at most one verb phrase.

    Splits happen at sentence-final punctuation always, and at commas,
    semicolons, and coordinating conjunctions only when verb phrases sit on
    both sides of the boundary.
    """
    if not tagged:
        return []
    vp_starts = [c.start_index for c in chunks if c.kind is ChunkKind.VP]

    def has_vp(lo: int, hi: int) -> bool:
        return any(lo <= s < hi for s in vp_starts)

    boundaries: list[int] = []  # index of first token of the next clause
    # sentence extents, used to look ahead for a second VP within the sentence
    sentence_end: dict[int, int] = {}
    end = len(tagged)
    for i in range(len(tagged) - 1, -1, -1):
        if tagged[i].token.lower in SENTENCE_FINAL:
            end = i + 1
        sentence_end[i] = end

    clause_start = 0
    for i, tt in enumerate(tagged):
        word = tt.token.lower
        if word in SENTENCE_FINAL:
            boundaries.append(i + 1)
            clause_start = i + 1
        elif word in CLAUSE_PUNCT and tt.tag is Tag.PUNCT:
            if has_vp(clause_start, i) and has_vp(i + 1, sentence_end[i]):
                boundaries.append(i + 1)  # punctuation attaches left
                clause_start = i + 1
        elif tt.tag is Tag.CONJ and word in {"and", "or", "but", "then"}:
            if has_vp(clause_start, i) and has_vp(i + 1, sentence_end[i]):
                boundaries.append(i)  # conjunction attaches right
                clause_start = i
    if not boundaries or boundaries[-1] < len(tagged):
        boundaries.append(len(tagged))

    clauses: list[Clause] = []
    start = 0
    for b in boundaries:
        if b <= start:
            continue
        span = tagged[start:b]
        marker = TemporalMarker.NONE
        for tt in span:
            if tt.tag is Tag.PUNCT:
                continue
            if tt.token.lower == "while":
                marker = TemporalMarker.WHILE
            elif tt.token.lower == "meanwhile":
                marker = TemporalMarker.MEANWHILE
            break
        idx = len(clauses) + 1
        clauses.append(
            Clause(
                id=f"c_{idx}",
                index=idx,
                char_start=span[0].token.char_start,
                char_end=span[-1].token.char_end,
                chunks=[c for c in chunks if start <= c.start_index and c.end_index < b],
                temporal_marker=marker,
            )
        )
        start = b
    return clauses


def analyse(text: str, ontology: Ontology) -> list[Clause]:
    """Full pipeline: tokenize, tag, chunk, segment."""
    tokens = tokenize(text)
    tagged = tag(tokens, ontology)
    return segment_clauses(text, tagged, chunk(tagged))


def debug_dump(text: str, ontology: Ontology) -> str:
    """token<TAB>tag<TAB>chunk lines, then one line per clause."""
    tokens = tokenize(text)
    tagged = tag(tokens, ontology)
    chunks = chunk(tagged)
    clauses = segment_clauses(text, tagged, chunks)
    by_token: dict[int, str] = {}
    for c in chunks:
        for tt in c.tokens:
            by_token[tt.token.index] = c.kind.value
    lines = [
        f"{tt.token.surface}\t{tt.tag.value}\t{by_token.get(tt.token.index, '-')}"
        for tt in tagged
    ]
    for cl in clauses:
        marker = f" [{cl.temporal_marker.value}]" if cl.temporal_marker is not TemporalMarker.NONE else ""
        lines.append(f"# {cl.id}: {text[cl.char_start:cl.char_end]!r}{marker}")
    return "\n".join(lines)
