# Copyright (c) 2025 VoidCanary-Lab
# SPDX-License-Identifier: GPL-3.0-or-later

class ProflowError(Exception):
    """Base class for every failure raised by the lab."""


class DomainError(ProflowError, ValueError):
    """Argument outside the domain of an operation."""


class OffCurveError(DomainError):
    """Projective point does not satisfy XY(X-Y) = cZ^3."""


class PoleError(ProflowError):
    """Evaluation hit a pole that is not reported as the point at infinity."""


class StabilizationError(ProflowError):
    def __init__(self, message, required_depth):
        super().__init__(f"{message} (required depth: {required_depth})")
        self.required_depth = required_depth


class SeriesOverflowError(ProflowError):
    """A series coefficient grew past the rational blow-up guard."""


class UndefinedEvaluationError(ProflowError):
    def __init__(self, flow, stage, point):
        super().__init__(f"{flow}: {stage} undefined at {point}")
        self.flow = flow
        self.stage = stage
        self.point = point


class CompletionError(ProflowError):
    """Finite-field completion is inconsistent or cannot be derived."""


class IdentityMismatchError(ProflowError):
    """Exact verdict and numeric spot check disagree."""
