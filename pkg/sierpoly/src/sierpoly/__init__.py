"""Sierpinski polygon graphs, their limit graphs and horofunction boundaries."""
