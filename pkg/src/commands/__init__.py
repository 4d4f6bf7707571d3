# CLI commands module
