"""Adapters: logging handler, log context, sinks and file IO."""
