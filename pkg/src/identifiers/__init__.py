# -*- coding: utf-8 -*-
"""
Misclassification Identifiers Package

Modules:
    features   - feature layouts per identifier kind
    gbdt       - gradient-boosted trees on logistic loss
    backends   - classifier backends (trees, logistic)
    identifier - naive baseline and trained identifiers
    evaluation - repeated-split evaluation with bootstrapped AUROC
"""
