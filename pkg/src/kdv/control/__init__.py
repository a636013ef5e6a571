"""Feedback laws and decay envelopes"""
from .feedback import (
    LAW_NAMES,
    FeedbackLaw,
    LinearFeedback,
    PointwiseSaturatedFeedback,
    SaturatedFeedback,
    ZeroFeedback,
    control_field,
    control_values,
    make_law,
)
from .envelope import DecayEnvelope, EnvelopeReport, class_k_gain, decay_envelope, envelope_check

__all__ = [
    'LAW_NAMES',
    'FeedbackLaw',
    'LinearFeedback',
    'PointwiseSaturatedFeedback',
    'SaturatedFeedback',
    'ZeroFeedback',
    'control_field',
    'control_values',
    'make_law',
    'DecayEnvelope',
    'EnvelopeReport',
    'class_k_gain',
    'decay_envelope',
    'envelope_check',
]
