"""CAIF: contract-governed agentic intent framework for O-RAN network slicing.

Natural-language operator intents are profiled, evaluated, refined and
compiled into formal Intent Contracts, which drive a feasibility-checked
closed-loop RRM-policy-ratio controller over a built-in discrete-time RAN
simulator.
"""

__version__ = "0.1.0"
