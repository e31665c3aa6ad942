# VerbNet lexicon
# Parses VerbNet-format XML into a class index with subclass recursion

import logging
import xml.etree.ElementTree as ET
from collections.abc import Iterable
from dataclasses import dataclass, field
from pathlib import Path

from ..errors import ResourceLoadError, VerbNetLookupError
from ..models.lexicon import VerbClass

logger = logging.getLogger(__name__)


@dataclass
class VerbNetLoadReport:
    files: int = 0
    classes: int = 0
    members: int = 0
    empty_classes: list[str] = field(default_factory=list)


class VerbLexicon:
    """Class id -> VerbClass, plus the inverse lemma -> class ids index."""

    def __init__(
        self,
        classes: dict[str, VerbClass],
        report: VerbNetLoadReport | None = None,
    ) -> None:
        self.classes = classes
        inverse: dict[str, set[str]] = {}
        for verb_class in classes.values():
            for lemma in verb_class.members:
                inverse.setdefault(lemma, set()).add(verb_class.class_id)
        self.inverse: dict[str, frozenset[str]] = {
            lemma: frozenset(ids) for lemma, ids in inverse.items()
        }
        self.report = report or VerbNetLoadReport(
            classes=len(classes), members=len(self.inverse)
        )

    def __len__(self) -> int:
        return len(self.classes)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, VerbLexicon):
            return NotImplemented
        return self.classes == other.classes

    __hash__ = None  # type: ignore[assignment]


def _member_name(raw: str) -> str:
    return raw.strip().replace("_", " ").lower()


def _collect(
    element: ET.Element,
    parent_id: str | None,
    path: Path,
    classes: dict[str, VerbClass],
) -> str:
    class_id = (element.get("ID") or "").strip()
    if not class_id:
        raise ResourceLoadError(f"<{element.tag}> without an ID attribute", str(path))
    if class_id in classes:
        raise ResourceLoadError(f"duplicate class id {class_id!r}", str(path))
    if parent_id is not None and not class_id.startswith(parent_id):
        logger.warning(
            "%s: subclass %s does not extend parent id %s", path, class_id, parent_id
        )

    # Reserve the id before recursing so a nested duplicate is caught too.
    classes[class_id] = VerbClass(class_id=class_id, parent_id=parent_id)
    members = sorted(
        {
            _member_name(m.get("name", ""))
            for m in element.findall("./MEMBERS/MEMBER")
            if m.get("name", "").strip()
        }
    )
    subclass_ids = [
        _collect(sub, class_id, path, classes)
        for sub in element.findall("./SUBCLASSES/VNSUBCLASS")
    ]
    classes[class_id] = VerbClass(
        class_id=class_id,
        members=tuple(members),
        subclass_ids=tuple(subclass_ids),
        parent_id=parent_id,
    )
    return class_id


def load_verbnet(directory: str | Path) -> VerbLexicon:
    """Index every class and subclass found in a directory of VerbNet XML files."""
    root_dir = Path(directory)
    if not root_dir.is_dir():
        raise ResourceLoadError("VerbNet directory not found", str(root_dir))

    report = VerbNetLoadReport()
    classes: dict[str, VerbClass] = {}
    for path in sorted(root_dir.glob("*.xml")):
        try:
            root = ET.parse(path).getroot()
        except ET.ParseError as e:
            raise ResourceLoadError(f"malformed XML: {e}", str(path)) from e
        if root.tag != "VNCLASS":
            raise ResourceLoadError(
                f"expected a VNCLASS root element, got <{root.tag}>", str(path)
            )
        _collect(root, None, path, classes)
        report.files += 1

    if not classes:
        logger.warning("No VerbNet classes found in %s", root_dir)

    report.empty_classes = sorted(c.class_id for c in classes.values() if not c.members)
    for class_id in report.empty_classes:
        logger.warning("VerbNet class %s has no members", class_id)

    lexicon = VerbLexicon(classes, report)
    report.classes = len(classes)
    report.members = len(lexicon.inverse)
    logger.info(
        "Loaded VerbNet from %s: %d files, %d classes, %d member lemmas",
        root_dir,
        report.files,
        report.classes,
        report.members,
    )
    return lexicon


def classes_for_verb(lex: VerbLexicon, lemma: str) -> frozenset[str]:
    """Classes (including subclasses) whose own members contain `lemma`."""
    return lex.inverse.get(lemma, frozenset())


def _descendants(lex: VerbLexicon, class_id: str) -> Iterable[VerbClass]:
    stack = [class_id]
    while stack:
        verb_class = lex.classes[stack.pop()]
        yield verb_class
        stack.extend(verb_class.subclass_ids)


def members_of_classes(
    lex: VerbLexicon, ids: Iterable[str], include_subclasses: bool = True
) -> list[str]:
    """Sorted union of the member lemmas of `ids`."""
    members: set[str] = set()
    for class_id in ids:
        if class_id not in lex.classes:
            raise VerbNetLookupError(f"unknown VerbNet class id {class_id!r}")
        if include_subclasses:
            for verb_class in _descendants(lex, class_id):
                members.update(verb_class.members)
        else:
            members.update(lex.classes[class_id].members)
    return sorted(members)
