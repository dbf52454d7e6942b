"""Bundled example scenarios: domain/program file pairs used by the command
line benchmark and the test suite."""

from importlib import resources

NAMES = ("robot1d", "backup", "intro", "opportunity", "long")


def scenario_text(name: str) -> tuple[str, str]:
    """Source text of a bundled scenario as (domain, program)."""
    if name not in NAMES:
        raise KeyError(f"unknown scenario '{name}'; expected one of {', '.join(NAMES)}")
    base = resources.files(__name__)
    domain_text = (base / f"{name}.domain").read_text(encoding="utf-8")
    program_text = (base / f"{name}.program").read_text(encoding="utf-8")
    return domain_text, program_text


def load(name: str):
    """Parse, validate, and expand a bundled scenario.

    Returns (core program, domain ready for projection).
    """
    from ..domain import expand_macros, validate_domain
    from ..parser import parse_domain, parse_program

    domain_text, program_text = scenario_text(name)
    dom = validate_domain(parse_domain(domain_text))
    surface = parse_program(program_text)
    return expand_macros(surface, dom)
