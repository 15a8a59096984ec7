int leak_early_return(int c) {
    int *p = malloc(4);
    if (c) {
        return 1;
    }
    free(p);
    return 0;
}
