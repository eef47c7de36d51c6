"""
VISUAL-001: SVG Validator
Checks generated SVG for well-formedness before it is written to disk.
"""

import re
import xml.etree.ElementTree as ET
from typing import List, Tuple

from .canvas import SVG_NS


class SvgValidator:
    """
    Validate SVG documents.

    Checks for:
    - Well-formed XML with an <svg> root in the SVG namespace
    - width / height / viewBox on the root
    - Finite coordinates (no nan / inf leaking from the data)
    """

    REQUIRED_ROOT_ATTRS = ("width", "height", "viewBox")
    COORDINATE_ATTRS = ("points", "x", "y", "x1", "y1", "x2", "y2", "width", "height")
    NON_FINITE = re.compile(r"\b(nan|inf)\b", re.IGNORECASE)

    def validate_svg(self, code: str) -> Tuple[bool, List[str]]:
        """
        Validate an SVG document.

        Args:
            code: SVG text

        Returns:
            Tuple of (is_valid: bool, errors: list[str])
        """
        if not code or not code.strip():
            return False, ["Empty SVG document"]

        try:
            root = ET.fromstring(code)
        except ET.ParseError as e:
            return False, [f"Malformed XML: {e}"]

        errors = []
        if root.tag != f"{{{SVG_NS}}}svg":
            errors.append(f"Root element must be <svg> in namespace {SVG_NS}, got '{root.tag}'")
        for attr in self.REQUIRED_ROOT_ATTRS:
            if attr not in root.attrib:
                errors.append(f"Missing root attribute '{attr}'")

        for element in root.iter():
            for attr in self.COORDINATE_ATTRS:
                value = element.attrib.get(attr)
                if value is not None and self.NON_FINITE.search(value):
                    tag = element.tag.split("}")[-1]
                    errors.append(f"Non-finite coordinate in <{tag} {attr}=...>")
                    break

        return len(errors) == 0, errors
