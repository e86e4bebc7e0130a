"""Event advisor service: a seq2seq generator behind the /advise protocol.

Given a leading context and the events planned so far, the model proposes
the next event as free text; the planning client owns the graph and snaps
the text onto it. The model here is deliberately small and trained from
scratch on the extracted-events corpus; any encoder-decoder generator
satisfying the wire contract may replace it via configuration.
"""

__version__ = "0.1.0"
