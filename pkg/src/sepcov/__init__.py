"""Deciders for separation and covering by group, abelian-group and modulo languages."""
