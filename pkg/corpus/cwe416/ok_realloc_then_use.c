int ok_realloc_then_use() {
    int *p = malloc(4);
    free(p);
    p = malloc(8);
    *p = 1;
    free(p);
    return 0;
}
