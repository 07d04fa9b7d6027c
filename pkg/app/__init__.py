# App initialization
