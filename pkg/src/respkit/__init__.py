"""respkit: author-in-the-loop rebuttal tooling.

Alignment of review-response-revision triplets, controllable response
generation under nine input settings, and a metric suite covering
controllability, input utilization, discourse, and quality.
"""

__version__ = "0.1.0"
