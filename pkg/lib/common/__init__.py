"""Shared helpers: exact linear algebra, task loading, reports, logging."""
