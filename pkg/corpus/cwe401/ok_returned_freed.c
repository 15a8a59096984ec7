int *ok_returned_freed_mk() {
    int *p = malloc(4);
    return p;
}
int ok_returned_freed() {
    int *q = ok_returned_freed_mk();
    free(q);
    return 0;
}
