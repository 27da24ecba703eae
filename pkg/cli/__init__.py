"""
Command-line interface for infoplan
"""
