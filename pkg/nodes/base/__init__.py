"""Módulo de SalFlow"""
