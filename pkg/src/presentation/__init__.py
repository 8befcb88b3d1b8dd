"""Presentation layer: the medfact command line"""
