from hypothesis import given
from hypothesis import strategies as st

from recipegraph.textproc import (
    ChunkKind,
    Tag,
    TemporalMarker,
    analyse,
    chunk,
    debug_dump,
    segment_clauses,
    tag,
    tokenize,
)


class TestTokenize:
    def test_punctuation_split(self):
        got = [t.surface for t in tokenize("Peel the mangoes, slice lengthwise")]
        assert got == ["Peel", "the", "mangoes", ",", "slice", "lengthwise"]

    def test_empty(self):
        assert tokenize("") == []

    def test_offsets_exact(self):
        toks = tokenize("mix.")
        assert [(t.char_start, t.char_end) for t in toks] == [(0, 3), (3, 4)]

    @given(st.text(alphabet=st.characters(blacklist_categories=("Cs",)), max_size=80))
    def test_round_trip(self, text):
        toks = tokenize(text)
        for t in toks:
            assert text[t.char_start : t.char_end] == t.surface
        # gaps between tokens are whitespace only
        prev = 0
        for t in toks:
            assert text[prev : t.char_start].strip() == ""
            prev = t.char_end
        assert text[prev:].strip() == ""


class TestTag:
    def tags(self, text, ontology):
        return [tt.tag for tt in tag(tokenize(text), ontology)]

    def test_imperative_verb(self, ontology):
        assert self.tags("Peel the mangoes", ontology) == [Tag.VERB, Tag.DET, Tag.NOUN]

    def test_total_and_deterministic(self, ontology):
        text = "While the rice cooks, add 2 cups of salted water and stir well."
        one = self.tags(text, ontology)
        two = self.tags(text, ontology)
        assert one == two
        assert len(one) == len(tokenize(text))

    def test_noun_reading_after_determiner(self, ontology):
        got = self.tags("Cut a slice", ontology)
        assert got == [Tag.VERB, Tag.DET, Tag.NOUN]

    def test_adverb_not_noun(self, ontology):
        got = self.tags("slice lengthwise", ontology)
        assert got == [Tag.VERB, Tag.OTHER]

    def test_numbers(self, ontology):
        got = self.tags("add 2 cups", ontology)
        assert got == [Tag.VERB, Tag.NUM, Tag.NOUN]


class TestChunk:
    def test_np_pp_vp(self, ontology):
        chunks = chunk(tag(tokenize("Mix the flour with the water"), ontology))
        kinds = [c.kind for c in chunks]
        assert kinds == [ChunkKind.VP, ChunkKind.NP, ChunkKind.PP]
        assert chunks[2].preposition == "with"
        assert chunks[2].head.lower == "water"

    def test_adjectives_in_np(self, ontology):
        chunks = chunk(tag(tokenize("Peel the sliced mangoes"), ontology))
        np = chunks[1]
        assert np.kind is ChunkKind.NP
        assert np.head.lower == "mangoes"


class TestSegment:
    def test_mango_sentence_three_clauses(self, ontology):
        clauses = analyse(
            "Peel the mangoes, slice lengthwise and remove the pits.", ontology
        )
        assert len(clauses) == 3
        verbs = [c.verb_phrase.head.lower for c in clauses]
        assert verbs == ["peel", "slice", "remove"]
        assert [c.id for c in clauses] == ["c_1", "c_2", "c_3"]

    def test_single_word(self, ontology):
        assert len(analyse("Serve.", ontology)) == 1

    def test_comma_without_second_vp_kept(self, ontology):
        clauses = analyse("Add the salt, the pepper and the sugar.", ontology)
        assert len(clauses) == 1

    def test_while_marker(self, ontology):
        clauses = analyse("While the rice cooks, peel the mangoes.", ontology)
        assert len(clauses) == 2
        assert clauses[0].temporal_marker is TemporalMarker.WHILE
        assert clauses[0].verb_phrase.head.lower == "cooks"
        assert clauses[1].temporal_marker is TemporalMarker.NONE

    def test_meanwhile_marker(self, ontology):
        clauses = analyse("Boil the broth. Meanwhile, dice the carrots.", ontology)
        assert clauses[1].temporal_marker is TemporalMarker.MEANWHILE

    def test_at_most_one_vp_per_clause(self, ontology):
        text = (
            "Soak the glutinous rice. Cook the rice with the coconut milk. "
            "Peel the mangoes, slice lengthwise and remove the pits. "
            "Top the rice with the fruit."
        )
        for c in analyse(text, ontology):
            vps = [ch for ch in c.chunks if ch.kind is ChunkKind.VP]
            assert len(vps) <= 1

    def test_spans_cover_source(self, ontology):
        text = "Peel the mangoes, slice lengthwise and remove the pits."
        clauses = analyse(text, ontology)
        for c in clauses:
            assert text[c.char_start : c.char_end].strip() != ""
        starts = [c.char_start for c in clauses]
        assert starts == sorted(starts)


class TestDebugDump:
    def test_format(self, ontology):
        dump = debug_dump("Peel the mangoes.", ontology)
        lines = dump.splitlines()
        assert lines[0].split("\t") == ["Peel", "VERB", "VP"]
        assert lines[-1].startswith("# c_1:")
