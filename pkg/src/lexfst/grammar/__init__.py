from lexfst.grammar.analysis import (
    Analysis,
    normalize_display,
    parse_analysis,
    parse_display,
    render_analysis,
)
from lexfst.grammar.dictionaries import (
    Grammar,
    ListedForm,
    RootEntry,
    SuffixEntry,
    build_analyzer,
    lexicon_ast,
    load_dictionaries,
    load_grammar,
    load_listed,
)
from lexfst.grammar.maithili import bundled_analyzer, load_bundled
