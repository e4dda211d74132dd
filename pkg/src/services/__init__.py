# -*- coding: utf-8 -*-
"""
Shared Services Package - pipeline orchestration.

Modules:
    synthetic - synthetic cohorts with planted misclassification signal
    reports   - report tables, markdown digest, atomic file emission
    runner    - the synth / audit / identify / flip / report commands
"""
