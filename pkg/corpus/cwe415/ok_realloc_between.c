int ok_realloc_between() {
    int *p = malloc(4);
    free(p);
    p = malloc(8);
    free(p);
    return 0;
}
