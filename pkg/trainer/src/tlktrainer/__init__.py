"""tlktrainer: fine-tune pretrained encoders on exported persuasion corpora.

Consumes the corpus file format produced by the corpus builder and emits
metrics reports in the shared "persuasion-metrics-report/1" schema.
"""

__version__ = "0.1.0"
