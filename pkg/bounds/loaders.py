"""
Input document loading for the management commands
"""

import json
import math
from pathlib import Path
from typing import NamedTuple, Optional

import numpy as np
from pydantic import ValidationError

from .events import EventSystem, JointDistribution, from_independent, from_joint, validate
from .exceptions import InputValidationError
from .schemas import InputDocument


class LoadedInput(NamedTuple):
    system: EventSystem
    joint: Optional[JointDistribution]


def _format_errors(exc: ValidationError) -> str:
    parts = []
    for error in exc.errors():
        location = '.'.join(str(part) for part in error['loc']) or '<document>'
        parts.append(f'{location}: {error["msg"]}')
    return '; '.join(parts)


def read_document(path) -> InputDocument:
    """
    Parse and schema-check a JSON input file

    Raises InputValidationError with line and column for malformed JSON.
    """
    try:
        text = Path(path).read_text(encoding='utf-8')
    except OSError as exc:
        raise InputValidationError('Cannot read input file', f'{path}: {exc.strerror}')
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputValidationError(
            'Malformed JSON',
            f'{path}: line {exc.lineno}, column {exc.colno}: {exc.msg}',
        )
    try:
        return InputDocument.model_validate(data)
    except ValidationError as exc:
        raise InputValidationError('Invalid input document', f'{path}: {_format_errors(exc)}')


def joint_from_document(document: InputDocument) -> JointDistribution:
    if document.joint is None:
        raise InputValidationError('Expected a joint document', 'the file has no "joint" key')
    atoms = np.array(document.joint.atoms, dtype=np.float64)
    # the schema accepts sums within 1e-9; the oracle wants 1e-12
    atoms = atoms / math.fsum(atoms)
    return JointDistribution(n=document.joint.n, mass=atoms)


def system_from_document(document: InputDocument, k: int) -> LoadedInput:
    """
    Build the event system a document describes

    A joint document becomes a system of depth min(n, k+1) and is returned as
    the exact reference as well.
    """
    if document.system is not None:
        system_in = document.system
        system = EventSystem(
            n=system_in.n,
            depth=system_in.depth,
            table={tuple(entry.subset): entry.p for entry in system_in.intersections},
        )
        violations = validate(system)
        if violations:
            raise InputValidationError(
                'Event system failed validation',
                '; '.join(v.message for v in violations),
            )
        return LoadedInput(system=system, joint=None)

    if document.generator is not None:
        independent = document.generator.independent
        return LoadedInput(system=from_independent(independent.alphas, independent.depth), joint=None)

    joint = joint_from_document(document)
    return LoadedInput(system=from_joint(joint, min(joint.n, k + 1)), joint=joint)


def load_input(path, k: int) -> LoadedInput:
    return system_from_document(read_document(path), k)


def load_joint(path) -> JointDistribution:
    return joint_from_document(read_document(path))
