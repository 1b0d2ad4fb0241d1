"""One-vs-rest classification of app reviews and tweets into problem reports,
inquiries and irrelevant feedback, with a classical and a CNN pipeline."""

__version__ = "0.1.0"
