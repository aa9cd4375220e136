"""
Utility modules for the valuations toolkit
"""
from .document_loader import DocumentLoader, SequenceDocument, load_document

__all__ = ['DocumentLoader', 'SequenceDocument', 'load_document']
