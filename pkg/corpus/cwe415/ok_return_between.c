int ok_return_between(int c) {
    int *p = malloc(4);
    if (c) {
        free(p);
        return 0;
    }
    free(p);
    return 1;
}
