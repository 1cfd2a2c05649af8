"""Document codecs: maps, scenarios, plans, logs, CSV, NDJSON and SVG."""
