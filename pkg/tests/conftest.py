from ordaccept import TypeGrammar, corpus_path, parse_file

# one line per acceptance criterion, printed in the terminal summary
ACCEPTANCE: dict = {}


def load(name: str):
    return parse_file(corpus_path(name))


def entries(name: str):
    p = load(name)
    g = TypeGrammar.from_program(p)
    return p, [g.pattern(e) for e in p.entries], g


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(ACCEPTANCE):
        terminalreporter.write_line(ACCEPTANCE[n])
