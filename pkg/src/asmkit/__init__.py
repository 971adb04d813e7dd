"""asmkit: dual-arm multi-part assembly planning and insertion control."""

__version__ = "0.1.0"
