"""Domain-aware robustness evaluation for zero-shot image classifiers.

The pipeline: a language model picks domain-appropriate corruptions from a
fixed 16-kind catalog, the harness sweeps them over a labeled or unlabeled
image dataset at graded severities, and robustness is summarized with both
supervised (balanced accuracy, mCE, rCE) and label-free (flip rate, mFR)
metrics, rendered to CSV/SVG/HTML reports.
"""

__version__ = "0.1.0"
