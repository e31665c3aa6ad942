"""
Inflection engine tests: regular rules, the irregular table, form detection
and case matching.
"""

import pytest

from lexsimp.errors import ResourceLoadError
from lexsimp.models.instance import POSCategory
from lexsimp.services.inflection import (
    InflectionForm,
    Inflector,
    IrregularTable,
    count_syllables,
    detect_form,
    inflect_to,
    load_irregulars,
    match_case,
)

F = InflectionForm
VERB, NOUN, ADJ = POSCategory.VERB, POSCategory.NOUN, POSCategory.ADJ


@pytest.fixture(scope="module")
def table(inflector) -> IrregularTable:
    return inflector.table


class TestInflectTo:
    @pytest.mark.parametrize(
        "lemma,form,expected",
        [
            # third person singular
            ("walk", F.THIRD_SG, "walks"),
            ("try", F.THIRD_SG, "tries"),
            ("play", F.THIRD_SG, "plays"),
            ("watch", F.THIRD_SG, "watches"),
            ("fix", F.THIRD_SG, "fixes"),
            ("buzz", F.THIRD_SG, "buzzes"),
            ("veto", F.THIRD_SG, "vetoes"),
            ("go", F.THIRD_SG, "goes"),
            ("have", F.THIRD_SG, "has"),
            ("be", F.THIRD_SG, "is"),
            # past
            ("walk", F.PAST, "walked"),
            ("hope", F.PAST, "hoped"),
            ("try", F.PAST, "tried"),
            ("play", F.PAST, "played"),
            ("stop", F.PAST, "stopped"),
            ("plan", F.PAST, "planned"),
            ("visit", F.PAST, "visited"),
            ("fix", F.PAST, "fixed"),
            ("rain", F.PAST, "rained"),
            ("agree", F.PAST, "agreed"),
            ("occur", F.PAST, "occurred"),
            ("panic", F.PAST, "panicked"),
            ("go", F.PAST, "went"),
            ("rise", F.PAST, "rose"),
            ("begin", F.PAST, "began"),
            ("be", F.PAST, "was"),
            # past participle
            ("take", F.PAST_PART, "taken"),
            ("rise", F.PAST_PART, "risen"),
            ("be", F.PAST_PART, "been"),
            ("fall", F.PAST_PART, "fallen"),
            ("walk", F.PAST_PART, "walked"),
            # gerund
            ("walk", F.GERUND, "walking"),
            ("hope", F.GERUND, "hoping"),
            ("see", F.GERUND, "seeing"),
            ("dye", F.GERUND, "dyeing"),
            ("toe", F.GERUND, "toeing"),
            ("stop", F.GERUND, "stopping"),
            ("run", F.GERUND, "running"),
            ("visit", F.GERUND, "visiting"),
            ("play", F.GERUND, "playing"),
            ("lie", F.GERUND, "lying"),
            ("be", F.GERUND, "being"),
            ("begin", F.GERUND, "beginning"),
            ("panic", F.GERUND, "panicking"),
            # plural
            ("cat", F.PLURAL, "cats"),
            ("box", F.PLURAL, "boxes"),
            ("city", F.PLURAL, "cities"),
            ("day", F.PLURAL, "days"),
            ("church", F.PLURAL, "churches"),
            ("kiss", F.PLURAL, "kisses"),
            ("hero", F.PLURAL, "heroes"),
            ("potato", F.PLURAL, "potatoes"),
            ("photo", F.PLURAL, "photos"),
            ("child", F.PLURAL, "children"),
            ("knife", F.PLURAL, "knives"),
            ("bus", F.PLURAL, "buses"),
            ("sheep", F.PLURAL, "sheep"),
            ("criterion", F.PLURAL, "criteria"),
            # comparison
            ("big", F.COMPARATIVE, "bigger"),
            ("big", F.SUPERLATIVE, "biggest"),
            ("hot", F.COMPARATIVE, "hotter"),
            ("fast", F.COMPARATIVE, "faster"),
            ("fast", F.SUPERLATIVE, "fastest"),
            ("large", F.COMPARATIVE, "larger"),
            ("large", F.SUPERLATIVE, "largest"),
            ("new", F.COMPARATIVE, "newer"),
            ("grey", F.COMPARATIVE, "greyer"),
            ("dry", F.COMPARATIVE, "drier"),
            ("dry", F.SUPERLATIVE, "driest"),
            ("happy", F.COMPARATIVE, "happier"),
            ("happy", F.SUPERLATIVE, "happiest"),
            ("simple", F.COMPARATIVE, "simpler"),
            ("narrow", F.COMPARATIVE, "narrower"),
            ("good", F.COMPARATIVE, "better"),
            ("good", F.SUPERLATIVE, "best"),
            ("bad", F.SUPERLATIVE, "worst"),
            ("far", F.COMPARATIVE, "farther"),
            ("beautiful", F.COMPARATIVE, "more beautiful"),
            ("careful", F.SUPERLATIVE, "most careful"),
            ("modern", F.COMPARATIVE, "more modern"),
            ("clever", F.COMPARATIVE, "cleverer"),
            ("gentle", F.SUPERLATIVE, "gentlest"),
            ("reluctant", F.COMPARATIVE, "more reluctant"),
            # base forms are returned lowercased
            ("Rise", F.BASE, "rise"),
            ("doctor", F.SINGULAR, "doctor"),
            ("happy", F.POSITIVE, "happy"),
            ("soon", F.UNKNOWN, "soon"),
        ],
    )
    def test_single_words(self, table, lemma, form, expected):
        assert inflect_to(lemma, form, table) == expected

    @pytest.mark.parametrize(
        "lemma,form,expected",
        [
            ("go up", F.PAST, "went up"),
            ("give up", F.GERUND, "giving up"),
            ("look after", F.THIRD_SG, "looks after"),
            ("credit card", F.PLURAL, "credit cards"),
            ("bus stop", F.PLURAL, "bus stops"),
            ("user friendly", F.COMPARATIVE, "more user friendly"),
            ("well known", F.SUPERLATIVE, "most well known"),
        ],
    )
    def test_multiword(self, table, lemma, form, expected):
        assert inflect_to(lemma, form, table) == expected

    def test_past_participle_falls_back_to_irregular_past(self):
        custom = IrregularTable()
        custom.add("slay", F.PAST, "slew")
        assert inflect_to("slay", F.PAST_PART, custom) == "slew"

    def test_regular_rules_need_no_table(self):
        assert inflect_to("jump", F.PAST, IrregularTable()) == "jumped"


class TestDetectForm:
    @pytest.mark.parametrize(
        "surface,pos,expected",
        [
            ("soared", VERB, ("soar", F.PAST)),
            ("rose", VERB, ("rise", F.PAST)),
            ("risen", VERB, ("rise", F.PAST_PART)),
            ("was", VERB, ("be", F.PAST)),
            ("were", VERB, ("be", F.PAST)),
            ("went", VERB, ("go", F.PAST)),
            ("rise", VERB, ("rise", F.BASE)),
            ("tries", VERB, ("try", F.THIRD_SG)),
            ("hoped", VERB, ("hope", F.PAST)),
            ("stopped", VERB, ("stop", F.PAST)),
            ("walking", VERB, ("walk", F.GERUND)),
            ("went up", VERB, ("go up", F.PAST)),
            ("children", NOUN, ("child", F.PLURAL)),
            ("cats", NOUN, ("cat", F.PLURAL)),
            ("boxes", NOUN, ("box", F.PLURAL)),
            ("cities", NOUN, ("city", F.PLURAL)),
            ("buses", NOUN, ("bus", F.PLURAL)),
            ("bus", NOUN, ("bus", F.SINGULAR)),
            ("physician", NOUN, ("physician", F.SINGULAR)),
            ("ice creams", NOUN, ("ice cream", F.PLURAL)),
            ("better", ADJ, ("good", F.COMPARATIVE)),
            ("larger", ADJ, ("large", F.COMPARATIVE)),
            ("biggest", ADJ, ("big", F.SUPERLATIVE)),
            ("happiest", ADJ, ("happy", F.SUPERLATIVE)),
            ("more reluctant", ADJ, ("reluctant", F.COMPARATIVE)),
            ("most reluctant", ADJ, ("reluctant", F.SUPERLATIVE)),
            ("unanimous", ADJ, ("unanimous", F.POSITIVE)),
        ],
    )
    def test_detect(self, inflector, surface, pos, expected):
        assert inflector.detect(surface, pos) == expected

    def test_case_and_whitespace_ignored(self, inflector):
        assert inflector.detect(" Soared ", VERB) == ("soar", F.PAST)

    def test_other_categories_are_unknown(self, table):
        assert detect_form("Quickly", POSCategory.OTHER, table) == (
            "quickly",
            F.UNKNOWN,
        )
        assert detect_form("the", POSCategory.UNASSIGNED, table) == (
            "the",
            F.UNKNOWN,
        )

    @pytest.mark.parametrize(
        "lemma",
        [
            "walk",
            "play",
            "stop",
            "try",
            "hope",
            "watch",
            "visit",
            "decide",
            "agree",
            "carry",
        ],
    )
    @pytest.mark.parametrize("form", [F.THIRD_SG, F.PAST, F.GERUND])
    def test_regular_verbs_round_trip(self, inflector, lemma, form):
        surface = inflect_to(lemma, form, inflector.table)
        assert inflector.detect(surface, VERB) == (lemma, form)

    @pytest.mark.parametrize("lemma", ["big", "large", "fast", "happy"])
    @pytest.mark.parametrize("form", [F.COMPARATIVE, F.SUPERLATIVE])
    def test_regular_adjectives_round_trip(self, inflector, lemma, form):
        surface = inflect_to(lemma, form, inflector.table)
        assert inflector.detect(surface, ADJ) == (lemma, form)

    @pytest.mark.parametrize("lemma", ["box", "city", "church", "day"])
    def test_regular_nouns_round_trip(self, inflector, lemma):
        surface = inflect_to(lemma, F.PLURAL, inflector.table)
        assert inflector.detect(surface, NOUN) == (lemma, F.PLURAL)


class TestRealize:
    def test_case_follows_template(self, table):
        inflector = Inflector(table)
        assert inflector.realize("go up", F.PAST, "Soared") == "Went up"
        assert inflector.realize("rise", F.PAST, "SOARED") == "ROSE"
        assert inflector.realize("climb", F.BASE, "soar") == "climb"

    def test_hyphenated_lemmas_are_inflectable(self, table):
        inflector = Inflector(table)
        assert inflector.realize("well-known", F.COMPARATIVE, "bigger") == (
            "more well-known"
        )

    def test_uninflectable_lemma(self, table):
        inflector = Inflector(table)

        assert inflector.realize("3d", F.PAST, "soared") is None
        assert inflector.realize("u.s.", F.PLURAL, "cats") is None
        assert inflector.uninflectable == 2
        # base forms never need inflecting
        assert inflector.realize("3d", F.BASE, "soar") == "3d"
        assert inflector.uninflectable == 2


class TestMatchCase:
    @pytest.mark.parametrize(
        "surface,template,expected",
        [
            ("rose", "Soared", "Rose"),
            ("nasa", "NASA", "NASA"),
            ("go up", "Went", "Go up"),
            ("climb", "soared", "climb"),
            ("rose", "I", "Rose"),
            ("x", "", "x"),
            ("", "Soared", ""),
        ],
    )
    def test_match_case(self, surface, template, expected):
        assert match_case(surface, template) == expected


class TestSyllables:
    @pytest.mark.parametrize(
        "word,count",
        [
            ("walk", 1),
            ("make", 1),
            ("free", 1),
            ("yes", 1),
            ("table", 2),
            ("happy", 2),
            ("idea", 2),
            ("beautiful", 3),
        ],
    )
    def test_count_syllables(self, word, count):
        assert count_syllables(word) == count


class TestLoadIrregulars:
    def test_bundled_table(self, table):
        assert table.forward[("rise", F.PAST)] == "rose"
        assert ("rise", F.PAST) in table.inverse["rose"]
        # identical forms are not indexed as inflections
        assert "cut" not in table.inverse

    def test_custom_table_is_lowercased(self, tmp_path):
        path = tmp_path / "irregulars.tsv"
        path.write_text("# lemma\tform\tsurface\nGo\tpast\tWent\n", encoding="utf-8")

        custom = load_irregulars(path)

        assert custom.forward == {("go", F.PAST): "went"}

    @pytest.mark.parametrize(
        "row",
        ["go\tPAST\n", "go\tPASTS\twent\n", "go\tBASE\tgo\n", "go\tUNKNOWN\tgo\n"],
    )
    def test_bad_rows(self, tmp_path, row):
        path = tmp_path / "irregulars.tsv"
        path.write_text("rise\tPAST\trose\n" + row, encoding="utf-8")

        with pytest.raises(ResourceLoadError) as exc_info:
            load_irregulars(path)
        assert exc_info.value.line_no == 2

    def test_missing_file(self, tmp_path):
        with pytest.raises(ResourceLoadError):
            load_irregulars(tmp_path / "absent.tsv")
