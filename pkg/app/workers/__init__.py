# Workers initialization
