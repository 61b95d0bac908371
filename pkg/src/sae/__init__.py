"""Distributed allegation escrow: n escrow nodes jointly hold
secret-shared allegations, authenticate filers with one-time-key MACs
computed as distributed VRFs, match allegations through per-bucket DVRF
tags, and reveal matching groups exactly when every member's threshold
is met."""

__version__ = "0.1.0"
