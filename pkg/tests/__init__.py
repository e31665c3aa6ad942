"""
lexsimp Test Suite

Tests are grouped by capability rather than by file:
- Resource loading (TSV, VerbNet, PPDB, synonym graph)
- Candidate modules and POS routing
- Inflection and re-ranking
- End-to-end pipeline runs and graceful degradation
- TSAR-2022 metrics against a reference implementation
- API contracts for the masked-LM wire protocol
- Command-line exit codes and output

Everything runs against the bundled mini resources and the frequency stub
scorer, so no model or network access is needed.
"""
