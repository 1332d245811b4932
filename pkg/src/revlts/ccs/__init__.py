from revlts.ccs.parser import ParseError, parse, parse_label
from revlts.ccs.semantics import (
    RefinedCcs,
    StandardCcs,
    enumerate_refined,
    enumerate_standard,
    independent,
    interpret_label,
)
from revlts.ccs.syntax import (
    NIL,
    TAU,
    Act,
    LeftL,
    Nil,
    Nu,
    NuL,
    Par,
    Pick,
    Rec,
    RecL,
    RightL,
    Sum,
    SyncL,
    Var,
    canonical_text,
    label_text,
    pretty,
    pretty_label,
    substitute,
    unfold,
)


def load(path) -> object:
    """Read a `.ccs` file holding a single process."""
    with open(path, encoding="utf-8") as fh:
        return parse(fh.read())


__all__ = [
    "NIL", "TAU", "Act", "LeftL", "Nil", "Nu", "NuL", "Par", "ParseError", "Pick", "Rec",
    "RecL", "RefinedCcs", "RightL", "StandardCcs", "Sum", "SyncL", "Var", "canonical_text",
    "enumerate_refined", "enumerate_standard", "independent", "interpret_label", "label_text",
    "load", "parse", "parse_label", "pretty", "pretty_label", "substitute", "unfold",
]
